//! The four-mode tensor space.
//!
//! Basis states `|N₁,N₂,N₃,N₄⟩` are flattened row-major with mode 1 slowest:
//! `index = ((N₁·d + N₂)·d + N₃)·d + N₄` where `d = n_max + 1`. The same
//! storage serves the spinor basis `(a,b,c,d)` and the spacetime basis
//! `(x,y,z,t)`; the basis tag is metadata only.

mod io;
mod operator;

pub use io::{state_from_json, state_to_json, StateRecord};
pub use operator::{lift, FourModeOperator, KronTerm};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::Cutoff;
use crate::linalg::{ONE, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeBasis {
    /// Modes `a, b, c, d`: the real components of the Weyl spinor.
    Spinor,
    /// Modes `x, y, z, t` after the basis rotation.
    Spacetime,
}

impl ModeBasis {
    pub fn name(self) -> &'static str {
        match self {
            ModeBasis::Spinor => "spinor",
            ModeBasis::Spacetime => "spacetime",
        }
    }

    pub fn modes(self) -> [ModeId; 4] {
        match self {
            ModeBasis::Spinor => [ModeId::A, ModeId::B, ModeId::C, ModeId::D],
            ModeBasis::Spacetime => [ModeId::X, ModeId::Y, ModeId::Z, ModeId::T],
        }
    }
}

/// One of the four modes, labelled in either basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeId {
    A,
    B,
    C,
    D,
    X,
    Y,
    Z,
    T,
}

impl ModeId {
    pub fn basis(self) -> ModeBasis {
        match self {
            ModeId::A | ModeId::B | ModeId::C | ModeId::D => ModeBasis::Spinor,
            _ => ModeBasis::Spacetime,
        }
    }

    /// Position in the flattened index, 0 = slowest.
    pub fn slot(self) -> usize {
        match self {
            ModeId::A | ModeId::X => 0,
            ModeId::B | ModeId::Y => 1,
            ModeId::C | ModeId::Z => 2,
            ModeId::D | ModeId::T => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ModeId::A => "a",
            ModeId::B => "b",
            ModeId::C => "c",
            ModeId::D => "d",
            ModeId::X => "x",
            ModeId::Y => "y",
            ModeId::Z => "z",
            ModeId::T => "t",
        }
    }
}

impl std::fmt::Display for ModeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Occupation numbers `(N₁,N₂,N₃,N₄)` of one basis state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModeOccupation {
    pub counts: [u32; 4],
    pub basis: ModeBasis,
}

impl ModeOccupation {
    pub fn new(counts: [u32; 4], basis: ModeBasis) -> Self {
        ModeOccupation { counts, basis }
    }

    pub fn spacetime(counts: [u32; 4]) -> Self {
        Self::new(counts, ModeBasis::Spacetime)
    }

    pub fn spinor(counts: [u32; 4]) -> Self {
        Self::new(counts, ModeBasis::Spinor)
    }

    pub fn total(&self) -> u32 {
        self.counts.iter().sum()
    }

    pub fn check(&self, cutoff: Cutoff) -> Result<()> {
        if self.counts.iter().any(|&n| n > cutoff.n_max()) {
            return Err(Error::OccupationOutOfRange {
                counts: self.counts,
                n_max: cutoff.n_max(),
            });
        }
        Ok(())
    }
}

/// Flat index of an occupation tuple.
pub fn index(occ: &ModeOccupation, cutoff: Cutoff) -> Result<usize> {
    occ.check(cutoff)?;
    Ok(index_unchecked(&occ.counts, cutoff.mode_dim()))
}

pub(crate) fn index_unchecked(counts: &[u32; 4], dim: usize) -> usize {
    counts.iter().fold(0usize, |acc, &n| acc * dim + n as usize)
}

/// Inverse of [`index`].
pub fn deindex(flat: usize, cutoff: Cutoff, basis: ModeBasis) -> Result<ModeOccupation> {
    let dim = cutoff.space_dim();
    if flat >= dim {
        return Err(Error::IndexOutOfRange { index: flat, dim });
    }
    Ok(ModeOccupation::new(deindex_unchecked(flat, cutoff.mode_dim()), basis))
}

pub(crate) fn deindex_unchecked(mut flat: usize, dim: usize) -> [u32; 4] {
    let mut counts = [0u32; 4];
    for slot in (0..4).rev() {
        counts[slot] = (flat % dim) as u32;
        flat /= dim;
    }
    counts
}

/// Every occupation tuple of the cutoff space in index order.
pub fn all_occupations(cutoff: Cutoff, basis: ModeBasis) -> impl Iterator<Item = ModeOccupation> {
    let dim = cutoff.mode_dim();
    (0..cutoff.space_dim()).map(move |i| ModeOccupation::new(deindex_unchecked(i, dim), basis))
}

/// Coefficients `c(N)` over the basis states of a cutoff space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    cutoff: Cutoff,
    basis: ModeBasis,
    coeffs: Vec<Complex64>,
}

impl StateVector {
    pub fn zeros(cutoff: Cutoff, basis: ModeBasis) -> Self {
        StateVector {
            cutoff,
            basis,
            coeffs: vec![ZERO; cutoff.space_dim()],
        }
    }

    pub fn from_coeffs(cutoff: Cutoff, basis: ModeBasis, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != cutoff.space_dim() {
            return Err(Error::DimensionMismatch {
                found: coeffs.len(),
                expected: cutoff.space_dim(),
            });
        }
        Ok(StateVector {
            cutoff,
            basis,
            coeffs,
        })
    }

    pub fn vacuum(cutoff: Cutoff, basis: ModeBasis) -> Self {
        let mut s = Self::zeros(cutoff, basis);
        s.coeffs[0] = ONE;
        s
    }

    /// Builds a state from `(occupation, coefficient)` pairs, summing repeats.
    pub fn from_terms(
        cutoff: Cutoff,
        basis: ModeBasis,
        terms: impl IntoIterator<Item = ([u32; 4], Complex64)>,
    ) -> Result<Self> {
        let mut s = Self::zeros(cutoff, basis);
        for (counts, c) in terms {
            let i = index(&ModeOccupation::new(counts, basis), cutoff)?;
            s.coeffs[i] += c;
        }
        Ok(s)
    }

    pub fn cutoff(&self) -> Cutoff {
        self.cutoff
    }

    pub fn basis(&self) -> ModeBasis {
        self.basis
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coefficient(&self, occ: &ModeOccupation) -> Result<Complex64> {
        Ok(self.coeffs[index(occ, self.cutoff)?])
    }

    /// Nonzero coefficients with their occupations, in index order.
    pub fn nonzero(&self) -> impl Iterator<Item = ([u32; 4], Complex64)> + '_ {
        let dim = self.cutoff.mode_dim();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != ZERO)
            .map(move |(i, &c)| (deindex_unchecked(i, dim), c))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        StateVector {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
            ..*self
        }
    }

    /// `self + other`, requiring matching cutoffs.
    pub fn add(&self, other: &StateVector) -> Result<Self> {
        check_same_cutoff(self.cutoff, other.cutoff)?;
        Ok(StateVector {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
            ..*self
        })
    }

    /// Squared norm carried by basis states with any occupation above
    /// `n_max − margin`.
    pub fn norm_outside_interior(&self, margin: u32) -> Result<f64> {
        let top = self.cutoff.interior_max(margin)?;
        let dim = self.cutoff.mode_dim();
        Ok(self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(i, _)| deindex_unchecked(*i, dim).iter().any(|&n| n > top))
            .fold(0.0, |acc, (_, c)| acc + c.norm_sqr()))
    }

    pub(crate) fn with_coeffs(&self, coeffs: Vec<Complex64>) -> Self {
        debug_assert_eq!(coeffs.len(), self.coeffs.len());
        StateVector { coeffs, ..*self }
    }
}

pub(crate) fn check_same_cutoff(left: Cutoff, right: Cutoff) -> Result<()> {
    if left != right {
        return Err(Error::CutoffMismatch {
            left: left.n_max(),
            right: right.n_max(),
        });
    }
    Ok(())
}

/// Unit coordinate vector at `index(occ)`.
pub fn build_basis_state(occ: &ModeOccupation, cutoff: Cutoff) -> Result<StateVector> {
    let i = index(occ, cutoff)?;
    let mut s = StateVector::zeros(cutoff, occ.basis);
    s.coeffs[i] = ONE;
    Ok(s)
}

/// The same state built by applying `N_i` creators per mode to the vacuum and
/// dividing by `√(N_i!)`.
pub fn build_basis_state_via_creators(occ: &ModeOccupation, cutoff: Cutoff) -> Result<StateVector> {
    occ.check(cutoff)?;
    let mut state = StateVector::vacuum(cutoff, occ.basis);
    for (slot, mode) in occ.basis.modes().into_iter().enumerate() {
        let creator = lift(
            &crate::fock::make_ladder(crate::fock::LadderKind::Create, cutoff),
            mode,
            cutoff,
        )?;
        let n = occ.counts[slot];
        let mut factorial = 1.0f64;
        for k in 1..=n {
            state = creator.apply(&state)?;
            factorial *= k as f64;
        }
        state = state.scaled(Complex64::new(factorial.sqrt().recip(), 0.0));
    }
    Ok(state)
}

/// `⟨lhs|rhs⟩ = Σ_N lhs*(N)·rhs(N)`.
pub fn inner_product(lhs: &StateVector, rhs: &StateVector) -> Result<Complex64> {
    check_same_cutoff(lhs.cutoff, rhs.cutoff)?;
    Ok(lhs
        .coeffs
        .iter()
        .zip(&rhs.coeffs)
        .fold(ZERO, |acc, (l, r)| acc + l.conj() * r))
}
