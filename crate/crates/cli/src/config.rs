use std::fmt;
use std::path::PathBuf;

use urfield_core::{Cutoff, Error, MetricSignature};

pub const EXIT_INPUT: u8 = 2;
pub const EXIT_DOMAIN: u8 = 3;
pub const EXIT_TOLERANCE: u8 = 4;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable or malformed input files.
    Input(String),
    /// Input that parses but violates a cutoff, cap or leak bound.
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Domain(_) => EXIT_DOMAIN,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Domain(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::InvalidCutoff(_)
            | Error::MarginTooLarge { .. }
            | Error::MarginTooSmall { .. }
            | Error::DimensionMismatch { .. }
            | Error::InvalidGrid(_)
            | Error::QuadratureOrderTooLow { .. }
            | Error::InvalidParticleCap { .. }
            | Error::InvalidParameters(_)
            | Error::DuplicateMode { .. }
            | Error::Parse { .. } => CliError::Input(msg),
            Error::OccupationOutOfRange { .. }
            | Error::IndexOutOfRange { .. }
            | Error::CutoffMismatch { .. }
            | Error::BasisMismatch { .. }
            | Error::OrderOutOfRange { .. }
            | Error::ParticleCapExceeded { .. }
            | Error::NormLeak { .. } => CliError::Domain(msg),
        }
    }
}

/// Parameters shared by the subcommands, checked before any computation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Per-mode occupation bound. Zero is only meaningful for field mode sets.
    pub cutoff: u32,
    pub margin: Option<u32>,
    pub signature: Option<MetricSignature>,
    pub quadrature_order: Option<usize>,
    pub particle_cap: Option<u32>,
    pub seed: u64,
    pub input: Vec<PathBuf>,
    pub out: PathBuf,
}

impl RunConfig {
    pub fn new(cutoff: u32, out: PathBuf) -> Self {
        RunConfig {
            cutoff,
            margin: None,
            signature: None,
            quadrature_order: None,
            particle_cap: None,
            seed: 0,
            input: Vec::new(),
            out,
        }
    }

    pub fn fock_cutoff(&self) -> Result<Cutoff, CliError> {
        Ok(Cutoff::new(self.cutoff)?)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(m) = self.margin {
            self.fock_cutoff()?.interior_max(m)?;
        }
        if let Some(q) = self.quadrature_order {
            let required = self.fock_cutoff()?.mode_dim();
            if q < required {
                return Err(Error::QuadratureOrderTooLow { order: q, required }.into());
            }
        }
        if let Some(cap) = self.particle_cap {
            if cap < 1 {
                return Err(Error::InvalidParticleCap { cap, required: 1 }.into());
            }
        }
        for p in &self.input {
            if !p.is_file() {
                return Err(CliError::Input(format!("cannot read {}", p.display())));
            }
        }
        Ok(())
    }
}
