//! Thin helpers over `sprs` CSR matrices and `nalgebra` dense matrices.
//!
//! Everything in the engine that is a matrix is a [`SparseMatrix`]; the dense
//! form exists only as an independent oracle for tests and for small
//! exponentials.

use nalgebra::DMatrix;
use num_complex::Complex64;
use sprs::{CsMat, TriMat};

pub type SparseMatrix = CsMat<Complex64>;
pub type DenseMatrix = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn identity(dim: usize) -> SparseMatrix {
    CsMat::eye(dim)
}

pub fn zeros(dim: usize) -> SparseMatrix {
    CsMat::zero((dim, dim))
}

/// Builds a CSR matrix from `(row, col, value)` triplets, summing duplicates.
pub fn from_triplets(dim: usize, triplets: impl IntoIterator<Item = (usize, usize, Complex64)>) -> SparseMatrix {
    let mut tri = TriMat::new((dim, dim));
    for (r, c, v) in triplets {
        tri.add_triplet(r, c, v);
    }
    tri.to_csr()
}

pub fn adjoint(m: &SparseMatrix) -> SparseMatrix {
    m.transpose_view().to_csr().map(|v| v.conj())
}

pub fn scale(m: &SparseMatrix, factor: Complex64) -> SparseMatrix {
    m.map(|v| v * factor)
}

/// `a·b − b·a`.
pub fn commutator(a: &SparseMatrix, b: &SparseMatrix) -> SparseMatrix {
    let ab: SparseMatrix = a * b;
    let ba: SparseMatrix = b * a;
    &ab - &ba
}

pub fn kron(a: &SparseMatrix, b: &SparseMatrix) -> SparseMatrix {
    sprs::kronecker_product(a.view(), b.view()).to_csr()
}

/// Iterates stored entries in row-major order.
pub fn entries(m: &SparseMatrix) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
    m.iter().map(|(&v, (r, c))| (r, c, v))
}

pub fn get(m: &SparseMatrix, row: usize, col: usize) -> Complex64 {
    m.get(row, col).copied().unwrap_or(ZERO)
}

pub fn to_dense(m: &SparseMatrix) -> DenseMatrix {
    let mut d = DenseMatrix::zeros(m.rows(), m.cols());
    for (r, c, v) in entries(m) {
        d[(r, c)] += v;
    }
    d
}

/// `y = m·x` for a CSR matrix.
pub fn matvec(m: &SparseMatrix, x: &[Complex64]) -> Vec<Complex64> {
    debug_assert_eq!(m.cols(), x.len());
    m.outer_iterator()
        .map(|row| row.iter().fold(ZERO, |acc, (c, &v)| acc + v * x[c]))
        .collect()
}

/// Frobenius norm of the entries whose row and column both satisfy `keep`.
pub fn masked_frobenius(m: &SparseMatrix, keep: impl Fn(usize) -> bool) -> f64 {
    entries(m)
        .filter(|&(r, c, _)| keep(r) && keep(c))
        .fold(0.0, |acc, (_, _, v)| acc + v.norm_sqr())
        .sqrt()
}

pub fn max_abs(m: &SparseMatrix) -> f64 {
    m.data().iter().fold(0.0, |acc, v| acc.max(v.norm()))
}

/// Entrywise `a − b`, measured as a Frobenius norm.
pub fn distance(a: &SparseMatrix, b: &SparseMatrix) -> f64 {
    let diff: SparseMatrix = a - b;
    masked_frobenius(&diff, |_| true)
}

pub fn is_hermitian(m: &SparseMatrix) -> bool {
    let adj = adjoint(m);
    let diff: SparseMatrix = m - &adj;
    max_abs(&diff) == 0.0
}
