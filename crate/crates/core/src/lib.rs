//! Truncated four-mode bosonic Fock space: ladder operators, Poincaré
//! generators, position-space wavefunctions and a second-quantized field over
//! the tensor-space modes.

pub mod error;
pub mod expm;
pub mod fock;
pub mod linalg;
pub mod poincare;
pub mod position_rep;
pub mod second_quant;
pub mod spinor_basis;
pub mod tensor4;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use fock::{make_ladder, Cutoff, LadderKind, LadderMatrix};
pub use poincare::{build_generators, build_phase_space, MetricSignature, PoincareGenerators};
pub use tensor4::{FourModeOperator, ModeBasis, ModeId, ModeOccupation, StateVector};
