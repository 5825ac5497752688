//! Position representation of tensor-space states.
//!
//! A basis state `|N_x,N_y,N_z,N_t⟩` is the product of four orthonormal
//! Hermite functions, one per axis, and a general state maps to
//! `Ψ(X) = Σ_N c(N)·φ_N(X)`. All four axes, time included, carry the same
//! Gaussian weight.
//!
//! Hermite functions use the orthonormal normalization `(2ⁿ n!)^{-1/2} π^{-1/4}`
//! and are evaluated by the three-term recurrence
//!
//! ```text
//! φ₀(x)   = π^{-1/4} exp(−x²/2)
//! φₙ₊₁(x) = √(2/(n+1))·x·φₙ(x) − √(n/(n+1))·φₙ₋₁(x)
//! ```
//!
//! so no factorial is ever formed.

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::Cutoff;
use crate::linalg::ZERO;
use crate::tensor4::{ModeBasis, ModeOccupation, StateVector};

pub const CSV_FORMAT_VERSION: u32 = 1;

/// `π^{-1/4}`
pub const PI_POW_NEG_QUARTER: f64 = 0.751_125_544_464_942_5;

/// Values `φ₀(x) … φ_max(x)`.
pub fn hermite_functions(max_order: u32, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(max_order as usize + 1);
    let phi0 = PI_POW_NEG_QUARTER * (-0.5 * x * x).exp();
    out.push(phi0);
    if max_order == 0 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * x * phi0);
    for n in 1..max_order as usize {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * x * out[n] - (nf / (nf + 1.0)).sqrt() * out[n - 1];
        out.push(next);
    }
    out
}

/// Orthonormal Hermite function of order `n` at `x`.
pub fn hermite_function(n: u32, x: f64) -> f64 {
    hermite_functions(n, x)[n as usize]
}

/// Evaluator bounded by a maximum order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HermiteEvaluator {
    max_order: u32,
}

impl HermiteEvaluator {
    pub fn new(max_order: u32) -> Self {
        HermiteEvaluator { max_order }
    }

    pub fn for_cutoff(cutoff: Cutoff) -> Self {
        Self::new(cutoff.n_max())
    }

    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    pub fn phi(&self, n: u32, x: f64) -> Result<f64> {
        self.check(n)?;
        Ok(hermite_function(n, x))
    }

    /// `φ₀(x) … φ_max(x)`.
    pub fn table(&self, x: f64) -> Vec<f64> {
        hermite_functions(self.max_order, x)
    }

    fn check(&self, n: u32) -> Result<()> {
        if n > self.max_order {
            return Err(Error::OrderOutOfRange {
                order: n,
                max: self.max_order,
            });
        }
        Ok(())
    }

    /// `φ_N(X) = φ_{N_x}(x)·φ_{N_y}(y)·φ_{N_z}(z)·φ_{N_t}(t)`.
    pub fn phi_product(&self, occ: &ModeOccupation, point: &SpacetimePoint) -> Result<f64> {
        let mut product = 1.0;
        for (n, x) in occ.counts.iter().zip(point.as_array()) {
            product *= self.phi(*n, x)?;
        }
        Ok(product)
    }
}

/// `X = (x, y, z, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SpacetimePoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub t: f64,
}

impl SpacetimePoint {
    pub const ORIGIN: SpacetimePoint = SpacetimePoint {
        x: 0.0,
        y: 0.0,
        z: 0.0,
        t: 0.0,
    };

    pub fn new(x: f64, y: f64, z: f64, t: f64) -> Self {
        SpacetimePoint { x, y, z, t }
    }

    pub fn from_array([x, y, z, t]: [f64; 4]) -> Self {
        Self::new(x, y, z, t)
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.x, self.y, self.z, self.t]
    }

    pub fn is_finite(&self) -> bool {
        self.as_array().iter().all(|v| v.is_finite())
    }
}

/// One grid axis: a uniform range or a fixed value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisSpec {
    Range { min: f64, max: f64, steps: usize },
    Fixed { value: f64 },
}

impl AxisSpec {
    pub fn fixed(value: f64) -> Self {
        AxisSpec::Fixed { value }
    }

    pub fn range(min: f64, max: f64, steps: usize) -> Self {
        AxisSpec::Range { min, max, steps }
    }

    pub fn len(&self) -> usize {
        match *self {
            AxisSpec::Range { steps, .. } => steps,
            AxisSpec::Fixed { .. } => 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn values(&self) -> Vec<f64> {
        match *self {
            AxisSpec::Range { min, max, steps } => {
                let h = (max - min) / (steps - 1) as f64;
                (0..steps).map(|k| min + h * k as f64).collect()
            }
            AxisSpec::Fixed { value } => vec![value],
        }
    }

    fn validate(&self, axis: &str) -> Result<()> {
        match *self {
            AxisSpec::Range { min, max, steps } => {
                if !(min.is_finite() && max.is_finite()) || min >= max {
                    return Err(Error::InvalidGrid(format!("{axis}: need finite min < max, got {min}..{max}")));
                }
                if steps < 2 {
                    return Err(Error::InvalidGrid(format!("{axis}: need at least 2 steps, got {steps}")));
                }
            }
            AxisSpec::Fixed { value } => {
                if !value.is_finite() {
                    return Err(Error::InvalidGrid(format!("{axis}: fixed value must be finite")));
                }
            }
        }
        Ok(())
    }
}

/// Axes in `x, y, z, t` order; points are enumerated row-major with `x` slowest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x: AxisSpec,
    pub y: AxisSpec,
    pub z: AxisSpec,
    pub t: AxisSpec,
}

impl GridSpec {
    pub fn new(axes: [AxisSpec; 4]) -> Result<Self> {
        let [x, y, z, t] = axes;
        let g = GridSpec { x, y, z, t };
        g.validate()?;
        Ok(g)
    }

    /// A range along `x` with the other axes fixed at zero.
    pub fn x_line(min: f64, max: f64, steps: usize) -> Result<Self> {
        Self::new([
            AxisSpec::range(min, max, steps),
            AxisSpec::fixed(0.0),
            AxisSpec::fixed(0.0),
            AxisSpec::fixed(0.0),
        ])
    }

    pub fn axes(&self) -> [AxisSpec; 4] {
        [self.x, self.y, self.z, self.t]
    }

    pub fn validate(&self) -> Result<()> {
        for (axis, name) in self.axes().iter().zip(["x", "y", "z", "t"]) {
            axis.validate(name)?;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.axes().iter().map(AxisSpec::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Per-axis index of flat point `k`.
    fn unflatten(&self, mut k: usize) -> [usize; 4] {
        let lens = self.axes().map(|a| a.len());
        let mut idx = [0; 4];
        for axis in (0..4).rev() {
            idx[axis] = k % lens[axis];
            k /= lens[axis];
        }
        idx
    }

    pub fn points(&self) -> Vec<SpacetimePoint> {
        let values = self.axes().map(|a| a.values());
        (0..self.len())
            .map(|k| {
                let idx = self.unflatten(k);
                SpacetimePoint::from_array([0, 1, 2, 3].map(|a| values[a][idx[a]]))
            })
            .collect()
    }
}

/// Samples of `Ψ(X)` over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionGrid {
    pub grid: GridSpec,
    pub cutoff: Cutoff,
    pub samples: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParsevalSummary {
    pub quadrature_order: usize,
    pub coefficient_norm_sqr: f64,
    pub quadrature_norm_sqr: f64,
}

/// JSON sidecar written next to a wavefunction CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMetadata {
    pub format_version: u32,
    pub cutoff: u32,
    pub grid: GridSpec,
    pub points: usize,
    pub coefficient_norm_sqr: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parseval: Option<ParsevalSummary>,
}

impl WavefunctionGrid {
    /// `x,y,z,t,re,im` rows preceded by a format-version comment.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * self.samples.len() + 64);
        let _ = writeln!(out, "# format_version: {CSV_FORMAT_VERSION}");
        out.push_str("x,y,z,t,re,im\n");
        for (p, v) in self.grid.points().iter().zip(&self.samples) {
            let _ = writeln!(out, "{},{},{},{},{},{}", p.x, p.y, p.z, p.t, v.re, v.im);
        }
        out
    }

    pub fn metadata(&self, coefficient_norm_sqr: f64, parseval: Option<ParsevalSummary>) -> GridMetadata {
        GridMetadata {
            format_version: CSV_FORMAT_VERSION,
            cutoff: self.cutoff.n_max(),
            grid: self.grid,
            points: self.samples.len(),
            coefficient_norm_sqr,
            parseval,
        }
    }
}

fn require_spacetime(state: &StateVector) -> Result<()> {
    if state.basis() != ModeBasis::Spacetime {
        return Err(Error::BasisMismatch {
            mode: "state".into(),
            found: state.basis().name(),
            expected: ModeBasis::Spacetime.name(),
        });
    }
    Ok(())
}

/// `Ψ(X) = Σ_N c(N)·φ_N(X)` at every grid point.
///
/// Points are evaluated in parallel; each point sums the nonzero coefficients
/// in index order, so the result does not depend on scheduling.
pub fn synthesize(state: &StateVector, grid: &GridSpec) -> Result<WavefunctionGrid> {
    require_spacetime(state)?;
    grid.validate()?;
    let cutoff = state.cutoff();
    let eval = HermiteEvaluator::for_cutoff(cutoff);
    let tables: [Vec<Vec<f64>>; 4] = grid.axes().map(|a| a.values().iter().map(|&v| eval.table(v)).collect());
    let terms: Vec<([u32; 4], Complex64)> = state.nonzero().collect();
    let samples = (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let idx = grid.unflatten(k);
            let rows = [0, 1, 2, 3].map(|a| &tables[a][idx[a]]);
            terms.iter().fold(ZERO, |acc, (n, c)| {
                let phi = rows[0][n[0] as usize] * rows[1][n[1] as usize] * rows[2][n[2] as usize] * rows[3][n[3] as usize];
                acc + c * phi
            })
        })
        .collect();
    Ok(WavefunctionGrid {
        grid: *grid,
        cutoff,
        samples,
    })
}

/// Gauss–Hermite nodes and weights for `∫ f(x) e^{−x²} dx`.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn new(order: usize) -> Result<Self> {
        let rule = gauss_quad::GaussHermite::new(order)
            .map_err(|_| Error::QuadratureOrderTooLow { order, required: 2 })?;
        let (nodes, weights) = rule.as_node_weight_pairs().iter().copied().unzip();
        Ok(QuadratureRule { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `wᵢ·exp(xᵢ²)`: weights for integrands that already carry the Gaussian,
    /// such as products of Hermite functions.
    pub fn plain_weights(&self) -> Vec<f64> {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * (x * x).exp())
            .collect()
    }

    /// `∫ f(x) dx` for `f` decaying like a Gaussian.
    pub fn integrate_plain(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(self.plain_weights()).map(|(&x, w)| w * f(x)).sum()
    }
}

/// `(Σ|c(N)|², ∫|Ψ|² d⁴X)` with the integral evaluated on the tensor-product
/// Gauss–Hermite rule of the given order.
pub fn parseval_check(state: &StateVector, order: usize) -> Result<(f64, f64)> {
    require_spacetime(state)?;
    let cutoff = state.cutoff();
    let required = cutoff.mode_dim();
    if order < required {
        return Err(Error::QuadratureOrderTooLow { order, required });
    }
    let rule = QuadratureRule::new(order)?;
    let eval = HermiteEvaluator::for_cutoff(cutoff);
    let d = cutoff.mode_dim();
    let q = order;
    // table[n][i] = φₙ(xᵢ)
    let by_node: Vec<Vec<f64>> = rule.nodes().iter().map(|&x| eval.table(x)).collect();

    // contract one axis at a time: shape goes d⁴ → q·d³ → q²·d² → q³·d → q⁴
    let mut current: Vec<Complex64> = state.coeffs().to_vec();
    let mut done = 0usize; // axes already mapped to nodes
    for _ in 0..4 {
        let outer = q.pow(done as u32);
        let inner = d.pow(3 - done as u32);
        let mut next = vec![ZERO; outer * q * inner];
        for o in 0..outer {
            for (i, phis) in by_node.iter().enumerate() {
                let dst = (o * q + i) * inner;
                for (n, &phi) in phis.iter().enumerate() {
                    let src = (o * d + n) * inner;
                    for s in 0..inner {
                        next[dst + s] += current[src + s] * phi;
                    }
                }
            }
        }
        current = next;
        done += 1;
    }
    let w = rule.plain_weights();
    let mut integral = 0.0;
    for (k, v) in current.iter().enumerate() {
        let (i, j, l, m) = (k / (q * q * q), (k / (q * q)) % q, (k / q) % q, k % q);
        integral += w[i] * w[j] * w[l] * w[m] * v.norm_sqr();
    }
    Ok((state.norm_sqr(), integral))
}
