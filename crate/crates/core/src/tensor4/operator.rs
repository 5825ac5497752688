use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;

use super::{check_same_cutoff, deindex_unchecked, ModeBasis, ModeId, StateVector};
use crate::error::{Error, Result};
use crate::fock::{Cutoff, LadderKind, LadderMatrix};
use crate::linalg::{self, SparseMatrix, ONE, ZERO};

/// `coeff · F₁ ⊗ F₂ ⊗ F₃ ⊗ F₄`, where a missing factor is the identity.
#[derive(Debug, Clone)]
pub struct KronTerm {
    pub coeff: Complex64,
    pub factors: [Option<Arc<SparseMatrix>>; 4],
}

impl KronTerm {
    fn product(&self, rhs: &KronTerm) -> Option<KronTerm> {
        let coeff = self.coeff * rhs.coeff;
        if coeff == ZERO {
            return None;
        }
        let mut factors: [Option<Arc<SparseMatrix>>; 4] = Default::default();
        for slot in 0..4 {
            factors[slot] = match (&self.factors[slot], &rhs.factors[slot]) {
                (None, None) => None,
                (Some(f), None) | (None, Some(f)) => Some(Arc::clone(f)),
                (Some(f), Some(g)) => {
                    let fg: SparseMatrix = &**f * &**g;
                    if fg.nnz() == 0 {
                        return None;
                    }
                    Some(Arc::new(fg))
                }
            };
        }
        Some(KronTerm { coeff, factors })
    }

    fn adjoint(&self) -> KronTerm {
        KronTerm {
            coeff: self.coeff.conj(),
            factors: self
                .factors
                .clone()
                .map(|f| f.map(|m| Arc::new(linalg::adjoint(&m)))),
        }
    }

    fn materialize(&self, mode_dim: usize) -> SparseMatrix {
        let id = linalg::identity(mode_dim);
        let factor = |slot: usize| self.factors[slot].as_deref().unwrap_or(&id);
        let tail = linalg::kron(factor(2), factor(3));
        let tail = linalg::kron(factor(1), &tail);
        let full = linalg::kron(factor(0), &tail);
        linalg::scale(&full, self.coeff)
    }

    /// Induced 1-norm bound, `|coeff|·Π‖F‖₁`.
    fn norm_bound(&self) -> f64 {
        self.factors
            .iter()
            .flatten()
            .map(|f| one_norm(f))
            .product::<f64>()
            * self.coeff.norm()
    }
}

fn one_norm(m: &SparseMatrix) -> f64 {
    let mut cols = vec![0.0; m.cols()];
    for (_, c, v) in linalg::entries(m) {
        cols[c] += v.norm();
    }
    cols.into_iter().fold(0.0, f64::max)
}

/// An operator on the four-mode space held as a sum of Kronecker products.
///
/// The factored form keeps products and commutators exact and cheap; the full
/// `(n_max+1)^4` sparse matrix is produced on demand by [`materialize`].
///
/// Arithmetic between operators of different cutoffs panics, as a shape
/// mismatch would in any matrix library.
///
/// [`materialize`]: FourModeOperator::materialize
#[derive(Debug, Clone)]
pub struct FourModeOperator {
    cutoff: Cutoff,
    basis: ModeBasis,
    terms: Vec<KronTerm>,
}

impl FourModeOperator {
    pub fn zero(cutoff: Cutoff, basis: ModeBasis) -> Self {
        FourModeOperator {
            cutoff,
            basis,
            terms: Vec::new(),
        }
    }

    pub fn identity(cutoff: Cutoff, basis: ModeBasis) -> Self {
        FourModeOperator {
            cutoff,
            basis,
            terms: vec![KronTerm {
                coeff: ONE,
                factors: Default::default(),
            }],
        }
    }

    /// `factor` acting on `mode`, identity elsewhere.
    pub fn single(cutoff: Cutoff, mode: ModeId, factor: SparseMatrix) -> Result<Self> {
        if factor.rows() != cutoff.mode_dim() || factor.cols() != cutoff.mode_dim() {
            return Err(Error::DimensionMismatch {
                found: factor.rows(),
                expected: cutoff.mode_dim(),
            });
        }
        let mut factors: [Option<Arc<SparseMatrix>>; 4] = Default::default();
        factors[mode.slot()] = Some(Arc::new(factor));
        Ok(FourModeOperator {
            cutoff,
            basis: mode.basis(),
            terms: vec![KronTerm { coeff: ONE, factors }],
        })
    }

    pub fn cutoff(&self) -> Cutoff {
        self.cutoff
    }

    pub fn basis(&self) -> ModeBasis {
        self.basis
    }

    pub fn terms(&self) -> &[KronTerm] {
        &self.terms
    }

    /// The same operator relabelled to another basis tag.
    pub fn retag(mut self, basis: ModeBasis) -> Self {
        self.basis = basis;
        self
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let terms = if factor == ZERO {
            Vec::new()
        } else {
            self.terms
                .iter()
                .map(|t| KronTerm {
                    coeff: t.coeff * factor,
                    factors: t.factors.clone(),
                })
                .collect()
        };
        FourModeOperator {
            terms,
            ..self.clone_shell()
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        FourModeOperator {
            terms: self.terms.iter().map(KronTerm::adjoint).collect(),
            ..self.clone_shell()
        }
    }

    /// `self·rhs − rhs·self`.
    pub fn commutator(&self, rhs: &FourModeOperator) -> Self {
        &(self * rhs) - &(rhs * self)
    }

    pub fn materialize(&self) -> SparseMatrix {
        let d = self.cutoff.mode_dim();
        let dim = self.cutoff.space_dim();
        self.terms
            .iter()
            .map(|t| t.materialize(d))
            .fold(linalg::zeros(dim), |acc, m| &acc + &m)
    }

    pub fn to_dense(&self) -> linalg::DenseMatrix {
        linalg::to_dense(&self.materialize())
    }

    /// Bound on the induced 1-norm, used to pick exponential step counts.
    pub fn norm_bound(&self) -> f64 {
        self.terms.iter().fold(0.0, |acc, t| acc + t.norm_bound())
    }

    /// Applies the operator to raw coefficients without materializing it.
    pub fn apply_coeffs(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let d = self.cutoff.mode_dim();
        assert_eq!(coeffs.len(), self.cutoff.space_dim(), "coefficient length");
        let mut out = vec![ZERO; coeffs.len()];
        for term in &self.terms {
            let mut work: Option<Vec<Complex64>> = None;
            for (slot, f) in term.factors.iter().enumerate() {
                if let Some(f) = f {
                    let src = work.as_deref().unwrap_or(coeffs);
                    work = Some(apply_along(f, src, slot, d));
                }
            }
            let src = work.as_deref().unwrap_or(coeffs);
            for (o, s) in out.iter_mut().zip(src) {
                *o += term.coeff * s;
            }
        }
        out
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        check_same_cutoff(self.cutoff, state.cutoff())?;
        if self.basis != state.basis() {
            return Err(Error::BasisMismatch {
                mode: "state".into(),
                found: state.basis().name(),
                expected: self.basis.name(),
            });
        }
        Ok(state.with_coeffs(self.apply_coeffs(state.coeffs())))
    }

    /// Frobenius norm of the operator restricted to occupations `≤ n_max − margin`
    /// in every mode.
    pub fn interior_norm(&self, margin: u32) -> Result<f64> {
        let top = self.cutoff.interior_max(margin)?;
        let d = self.cutoff.mode_dim();
        let m = self.materialize();
        Ok(linalg::masked_frobenius(&m, |i| {
            deindex_unchecked(i, d).iter().all(|&n| n <= top)
        }))
    }

    /// `‖self − rhs‖` on the interior subspace.
    pub fn interior_distance(&self, rhs: &FourModeOperator, margin: u32) -> Result<f64> {
        (self - rhs).interior_norm(margin)
    }

    pub fn is_hermitian(&self) -> bool {
        linalg::is_hermitian(&self.materialize())
    }

    fn clone_shell(&self) -> Self {
        FourModeOperator {
            cutoff: self.cutoff,
            basis: self.basis,
            terms: Vec::new(),
        }
    }

    fn assert_compatible(&self, rhs: &FourModeOperator) {
        assert_eq!(self.cutoff, rhs.cutoff, "operators built for different cutoffs");
    }
}

/// `out[o, i, s] = Σ_j F[i, j] · v[o, j, s]` with the mode at `slot` in the middle.
fn apply_along(f: &SparseMatrix, v: &[Complex64], slot: usize, d: usize) -> Vec<Complex64> {
    let inner = d.pow(3 - slot as u32);
    let outer = v.len() / (d * inner);
    let mut out = vec![ZERO; v.len()];
    for o in 0..outer {
        let base = o * d * inner;
        for (i, row) in f.outer_iterator().enumerate() {
            let dst = base + i * inner;
            for (j, &fij) in row.iter() {
                let src = base + j * inner;
                for s in 0..inner {
                    out[dst + s] += fij * v[src + s];
                }
            }
        }
    }
    out
}

impl Add for &FourModeOperator {
    type Output = FourModeOperator;

    fn add(self, rhs: &FourModeOperator) -> FourModeOperator {
        self.assert_compatible(rhs);
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        FourModeOperator {
            terms,
            ..self.clone_shell()
        }
    }
}

impl Sub for &FourModeOperator {
    type Output = FourModeOperator;

    fn sub(self, rhs: &FourModeOperator) -> FourModeOperator {
        self + &(-rhs)
    }
}

impl Neg for &FourModeOperator {
    type Output = FourModeOperator;

    fn neg(self) -> FourModeOperator {
        self.scale_real(-1.0)
    }
}

impl Mul for &FourModeOperator {
    type Output = FourModeOperator;

    fn mul(self, rhs: &FourModeOperator) -> FourModeOperator {
        self.assert_compatible(rhs);
        let terms = self
            .terms
            .iter()
            .flat_map(|l| rhs.terms.iter().filter_map(move |r| l.product(r)))
            .collect();
        FourModeOperator {
            terms,
            ..self.clone_shell()
        }
    }
}

/// `I ⊗ … ⊗ op ⊗ … ⊗ I` with `op` at the slot of `mode`.
pub fn lift(op: &LadderMatrix, mode: ModeId, cutoff: Cutoff) -> Result<FourModeOperator> {
    check_same_cutoff(op.cutoff(), cutoff)?;
    if op.kind() == LadderKind::Identity {
        return Ok(FourModeOperator::identity(cutoff, mode.basis()));
    }
    FourModeOperator::single(cutoff, mode, op.matrix().clone())
}
