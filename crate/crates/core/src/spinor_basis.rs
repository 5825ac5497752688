//! The real-component map of a Weyl spinor from `(a, b, c, d)` to
//! `(a_x, a_y, a_z, a_t)`, and its lift to ladder operators.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fock::{make_ladder, Cutoff, LadderKind};
use crate::tensor4::{lift, FourModeOperator, ModeBasis};

/// Real components of `u = (a + bi, c + di)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinorAmplitude {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl SpinorAmplitude {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        SpinorAmplitude { a, b, c, d }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// `a² + b² + c² + d²`; equal to 1 for a normalized unit.
    pub fn norm_sqr(&self) -> f64 {
        self.as_array().iter().map(|v| v * v).sum()
    }

    pub fn weyl(&self) -> [Complex64; 2] {
        [Complex64::new(self.a, self.b), Complex64::new(self.c, self.d)]
    }
}

/// Rows give `a_x, a_y, a_z, a_t` in terms of `a, b, c, d`.
pub const BASIS_ROTATION: [[f64; 4]; 4] = [
    [0.5, -0.5, 0.5, -0.5],
    [0.5, -0.5, -0.5, 0.5],
    [0.5, 0.5, -0.5, -0.5],
    [0.5, 0.5, 0.5, 0.5],
];

pub fn to_xyzt(s: &SpinorAmplitude) -> [f64; 4] {
    let v = s.as_array();
    BASIS_ROTATION.map(|row| row.iter().zip(&v).map(|(m, x)| m * x).sum())
}

/// Inverse of [`to_xyzt`]; the rotation is orthogonal so this is its transpose.
pub fn from_xyzt(w: [f64; 4]) -> SpinorAmplitude {
    let col = |k: usize| (0..4).map(|r| BASIS_ROTATION[r][k] * w[r]).sum();
    SpinorAmplitude::new(col(0), col(1), col(2), col(3))
}

/// The Weyl spinor written directly in the rotated components.
pub fn weyl_from_xyzt(w: [f64; 4]) -> [Complex64; 2] {
    let [x, y, z, t] = w;
    [
        Complex64::new(0.5 * (x + y + z + t), 0.5 * (-x - y + z + t)),
        Complex64::new(0.5 * (x - y - z + t), 0.5 * (-x + y - z + t)),
    ]
}

pub type Pauli = [[Complex64; 2]; 2];

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub const SIGMA_X: Pauli = [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]];
pub const SIGMA_Y: Pauli = [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]];
pub const SIGMA_Z: Pauli = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]];
pub const SIGMA_T: Pauli = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];

/// Annihilators `â_x, â_y, â_z, â_t` assembled as rotated combinations of the
/// lifted spinor-basis annihilators `â, b̂, ĉ, d̂`, tagged with the spacetime basis.
///
/// Downstream modules build the spacetime operators directly per mode; this
/// route exists to check that the rotation preserves the canonical algebra.
pub fn lift_basis_change(cutoff: Cutoff) -> Result<[FourModeOperator; 4]> {
    let a = make_ladder(LadderKind::Annihilate, cutoff);
    let spinor = ModeBasis::Spinor
        .modes()
        .map(|mode| lift(&a, mode, cutoff));
    let mut lifted = Vec::with_capacity(4);
    for op in spinor {
        lifted.push(op?);
    }
    Ok(BASIS_ROTATION.map(|row| {
        row.iter()
            .zip(&lifted)
            .fold(FourModeOperator::zero(cutoff, ModeBasis::Spinor), |acc, (&w, op)| {
                &acc + &op.scale_real(w)
            })
            .retag(ModeBasis::Spacetime)
    }))
}
