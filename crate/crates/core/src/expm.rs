//! Matrix exponentials.
//!
//! `expm_apply` computes `exp(s·A)·v` for a factored four-mode operator by
//! splitting `s·A` into `m` steps of norm at most one and summing the Taylor
//! series of each step to machine precision. It never forms the matrix, so it
//! works at cutoffs where the dense `(n_max+1)^4` block would not fit in
//! memory. `expm_dense` is the dense scaling-and-squaring Padé routine, used
//! for small blocks and as a cross-check.

use num_complex::Complex64;

use crate::linalg::DenseMatrix;
use crate::tensor4::FourModeOperator;

const MAX_TAYLOR_TERMS: usize = 200;

pub fn expm_dense(m: &DenseMatrix) -> DenseMatrix {
    m.exp()
}

fn inf_norm(v: &[Complex64]) -> f64 {
    v.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// `exp(scale · op) · v`.
pub fn expm_apply(op: &FourModeOperator, scale: Complex64, v: &[Complex64]) -> Vec<Complex64> {
    let bound = op.norm_bound() * scale.norm();
    if bound == 0.0 {
        return v.to_vec();
    }
    let steps = bound.ceil().max(1.0) as usize;
    let step_scale = scale / steps as f64;
    let mut current = v.to_vec();
    for _ in 0..steps {
        let mut sum = current.clone();
        let mut term = current;
        for k in 1..=MAX_TAYLOR_TERMS {
            let factor = step_scale / k as f64;
            term = op.apply_coeffs(&term);
            term.iter_mut().for_each(|z| *z *= factor);
            for (s, t) in sum.iter_mut().zip(&term) {
                *s += t;
            }
            let tn = inf_norm(&term);
            if tn == 0.0 || tn <= f64::EPSILON * 1e-3 * inf_norm(&sum) {
                break;
            }
        }
        current = sum;
    }
    current
}
