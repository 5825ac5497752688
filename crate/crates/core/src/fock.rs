//! Single-mode truncated ladder algebra.
//!
//! A mode keeps occupations `0..=n_max`. The annihilator carries `√N` on the
//! first superdiagonal, the creator is its adjoint and the number operator is
//! `diag(0, 1, …, n_max)`. Truncation makes `â†|n_max⟩ = 0`, so `[â, â†]`
//! equals the identity everywhere except the last diagonal entry, which is
//! `−n_max`. Identity checks are therefore stated on an interior subspace.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, SparseMatrix};

/// Largest occupation number kept per mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Cutoff(u32);

impl Cutoff {
    pub fn new(n_max: u32) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidCutoff(n_max));
        }
        Ok(Cutoff(n_max))
    }

    pub fn n_max(self) -> u32 {
        self.0
    }

    /// Dimension of a single mode, `n_max + 1`.
    pub fn mode_dim(self) -> usize {
        self.0 as usize + 1
    }

    /// Dimension of the four-mode space, `(n_max + 1)^4`.
    pub fn space_dim(self) -> usize {
        self.mode_dim().pow(4)
    }

    /// Highest occupation that still counts as interior for the given margin.
    pub fn interior_max(self, margin: u32) -> Result<u32> {
        if margin >= self.0 {
            return Err(Error::MarginTooLarge {
                margin,
                n_max: self.0,
            });
        }
        Ok(self.0 - margin)
    }
}

impl TryFrom<u32> for Cutoff {
    type Error = Error;

    fn try_from(n_max: u32) -> Result<Self> {
        Cutoff::new(n_max)
    }
}

impl From<Cutoff> for u32 {
    fn from(c: Cutoff) -> u32 {
        c.0
    }
}

impl std::fmt::Display for Cutoff {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LadderKind {
    Annihilate,
    Create,
    Number,
    Identity,
    /// Diagonal 0/1 selector of occupations `≤ n_max − margin`.
    InteriorProjector { margin: u32 },
}

/// A single-mode operator together with the cutoff it was built for.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderMatrix {
    kind: LadderKind,
    cutoff: Cutoff,
    matrix: SparseMatrix,
}

impl LadderMatrix {
    pub fn kind(&self) -> LadderKind {
        self.kind
    }

    pub fn cutoff(&self) -> Cutoff {
        self.cutoff
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> SparseMatrix {
        self.matrix
    }

    pub fn to_dense(&self) -> linalg::DenseMatrix {
        linalg::to_dense(&self.matrix)
    }

    /// `⟨row|op|col⟩`.
    pub fn element(&self, row: u32, col: u32) -> Complex64 {
        linalg::get(&self.matrix, row as usize, col as usize)
    }
}

/// Builds `â`, `â†`, `â†â` or the identity for one mode.
pub fn make_ladder(kind: LadderKind, cutoff: Cutoff) -> LadderMatrix {
    let dim = cutoff.mode_dim();
    let n_max = cutoff.n_max() as usize;
    let sqrt = |n: usize| Complex64::new((n as f64).sqrt(), 0.0);
    let matrix = match kind {
        LadderKind::Annihilate => linalg::from_triplets(dim, (1..=n_max).map(|n| (n - 1, n, sqrt(n)))),
        LadderKind::Create => linalg::from_triplets(dim, (1..=n_max).map(|n| (n, n - 1, sqrt(n)))),
        LadderKind::Number => {
            linalg::from_triplets(dim, (1..=n_max).map(|n| (n, n, Complex64::new(n as f64, 0.0))))
        }
        LadderKind::Identity => linalg::identity(dim),
        LadderKind::InteriorProjector { margin } => {
            let top = n_max.saturating_sub(margin as usize);
            linalg::from_triplets(dim, (0..=top).map(|n| (n, n, linalg::ONE)))
        }
    };
    LadderMatrix {
        kind,
        cutoff,
        matrix,
    }
}

/// Diagonal projector onto occupations `≤ n_max − margin`.
pub fn interior_projector(cutoff: Cutoff, margin: u32) -> Result<LadderMatrix> {
    cutoff.interior_max(margin)?;
    Ok(make_ladder(LadderKind::InteriorProjector { margin }, cutoff))
}
