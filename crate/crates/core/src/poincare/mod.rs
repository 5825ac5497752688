//! Position and momentum operators, the ten Poincaré generators, a numerical
//! audit of their commutator algebra, and state transformation by operator
//! exponentials.
//!
//! Spacetime index convention: `μ = 0` is `t`, `μ = 1, 2, 3` are `x, y, z`.
//! The generators are kept in two forms. The xp-form is the product of the
//! phase-space operators and is the one used for transformations; the
//! ladder-form is the bilinear in `â, â†` and is compared against the
//! xp-form by the audit, which records the global sign relating them.

mod audit;
mod transform;

pub use audit::{
    audit_algebra, audit_forms, AlgebraAuditReport, AuditEntry, GateCheck, RelationKind, MIN_AUDIT_MARGIN,
};
pub use transform::{
    poincare_transform, shifted_vacuum_fidelity, ShiftFidelity, TransformOptions, TransformOutcome,
    TransformParameters,
};

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fock::{make_ladder, Cutoff, LadderKind};
use crate::linalg::{self, I};
use crate::tensor4::{lift, FourModeOperator, ModeBasis, ModeId};

/// Diagonal of the Minkowski metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MetricSignature {
    /// `(+, −, −, −)`
    #[serde(rename = "+---")]
    MostlyMinus,
    /// `(−, +, +, +)`
    #[serde(rename = "-+++")]
    MostlyPlus,
}

impl MetricSignature {
    pub const ALL: [MetricSignature; 2] = [MetricSignature::MostlyMinus, MetricSignature::MostlyPlus];

    pub fn diagonal(self) -> [f64; 4] {
        match self {
            MetricSignature::MostlyMinus => [1.0, -1.0, -1.0, -1.0],
            MetricSignature::MostlyPlus => [-1.0, 1.0, 1.0, 1.0],
        }
    }

    /// `η_{μν}`; the metric is its own inverse so this also gives `η^{μν}`.
    pub fn eta(self, mu: usize, nu: usize) -> f64 {
        if mu == nu {
            self.diagonal()[mu]
        } else {
            0.0
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MetricSignature::MostlyMinus => "+---",
            MetricSignature::MostlyPlus => "-+++",
        }
    }
}

impl std::str::FromStr for MetricSignature {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "+---" => Ok(MetricSignature::MostlyMinus),
            "-+++" => Ok(MetricSignature::MostlyPlus),
            other => Err(format!("unknown signature {other:?}, expected +--- or -+++")),
        }
    }
}

impl std::fmt::Display for MetricSignature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Spacetime mode carrying index `μ`.
pub fn mode_of(mu: usize) -> ModeId {
    [ModeId::T, ModeId::X, ModeId::Y, ModeId::Z][mu]
}

/// `x̂, ŷ, ẑ, t̂` and their conjugate momenta, indexed by mode slot
/// (`x = 0, y = 1, z = 2, t = 3`).
#[derive(Debug, Clone)]
pub struct PhaseSpaceOperators {
    cutoff: Cutoff,
    annihilators: [FourModeOperator; 4],
    positions: [FourModeOperator; 4],
    momenta: [FourModeOperator; 4],
}

impl PhaseSpaceOperators {
    pub fn cutoff(&self) -> Cutoff {
        self.cutoff
    }

    pub fn annihilator(&self, mode: ModeId) -> &FourModeOperator {
        &self.annihilators[mode.slot()]
    }

    pub fn position(&self, mode: ModeId) -> &FourModeOperator {
        &self.positions[mode.slot()]
    }

    pub fn momentum(&self, mode: ModeId) -> &FourModeOperator {
        &self.momenta[mode.slot()]
    }

    /// `(q̂ + i p̂)/√2`, the annihilator recovered from position and momentum.
    pub fn annihilator_from_phase_space(&self, mode: ModeId) -> FourModeOperator {
        (self.position(mode) + &self.momentum(mode).scale(I)).scale_real(FRAC_1_SQRT_2)
    }
}

/// Builds `q̂ = (â + â†)/√2` and `p̂ = −i(â − â†)/√2` for each spacetime mode.
///
/// Both single-mode factors are formed from the same `√N/√2` magnitudes so
/// that cancellations between `q̂` and `p̂` products are exact.
pub fn build_phase_space(cutoff: Cutoff) -> Result<PhaseSpaceOperators> {
    let a = make_ladder(LadderKind::Annihilate, cutoff);
    let ad = make_ladder(LadderKind::Create, cutoff);
    let sum: linalg::SparseMatrix = a.matrix() + ad.matrix();
    let diff: linalg::SparseMatrix = a.matrix() - ad.matrix();
    let q = linalg::scale(&sum, Complex64::new(FRAC_1_SQRT_2, 0.0));
    let p = linalg::scale(&diff, Complex64::new(0.0, -FRAC_1_SQRT_2));
    let modes = ModeBasis::Spacetime.modes();
    let mut annihilators = Vec::with_capacity(4);
    let mut positions = Vec::with_capacity(4);
    let mut momenta = Vec::with_capacity(4);
    for mode in modes {
        annihilators.push(lift(&a, mode, cutoff)?);
        positions.push(FourModeOperator::single(cutoff, mode, q.clone())?);
        momenta.push(FourModeOperator::single(cutoff, mode, p.clone())?);
    }
    let arr = |v: Vec<FourModeOperator>| -> [FourModeOperator; 4] {
        v.try_into().expect("four modes")
    };
    Ok(PhaseSpaceOperators {
        cutoff,
        annihilators: arr(annihilators),
        positions: arr(positions),
        momenta: arr(momenta),
    })
}

/// One Lorentz generator `M_{μν}` (`μ < ν`) in both forms.
#[derive(Debug, Clone)]
pub struct LorentzGenerator {
    pub mu: usize,
    pub nu: usize,
    pub xp: FourModeOperator,
    pub ladder: FourModeOperator,
}

impl LorentzGenerator {
    pub fn name(&self) -> String {
        format!("M_{}{}", self.mu, self.nu)
    }

    pub fn is_rotation(&self) -> bool {
        self.mu > 0
    }
}

/// `P_0 … P_3` and the six `M_{μν}`.
#[derive(Debug, Clone)]
pub struct PoincareGenerators {
    cutoff: Cutoff,
    phase_space: PhaseSpaceOperators,
    translations: [FourModeOperator; 4],
    translations_ladder: [FourModeOperator; 4],
    lorentz: Vec<LorentzGenerator>,
}

/// Index pairs of the Lorentz generators in storage order.
pub const LORENTZ_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

impl PoincareGenerators {
    pub fn cutoff(&self) -> Cutoff {
        self.cutoff
    }

    pub fn phase_space(&self) -> &PhaseSpaceOperators {
        &self.phase_space
    }

    /// `P_μ`.
    pub fn p(&self, mu: usize) -> &FourModeOperator {
        &self.translations[mu]
    }

    /// `P_μ` assembled from lifted ladder operators.
    pub fn p_ladder(&self, mu: usize) -> &FourModeOperator {
        &self.translations_ladder[mu]
    }

    pub fn lorentz(&self) -> &[LorentzGenerator] {
        &self.lorentz
    }

    fn lorentz_entry(&self, mu: usize, nu: usize) -> Option<(&LorentzGenerator, f64)> {
        if mu == nu {
            return None;
        }
        let (lo, hi, sign) = if mu < nu { (mu, nu, 1.0) } else { (nu, mu, -1.0) };
        self.lorentz
            .iter()
            .find(|g| g.mu == lo && g.nu == hi)
            .map(|g| (g, sign))
    }

    /// xp-form `M_{μν}` for any ordered pair, using `M_{νμ} = −M_{μν}` and
    /// `M_{μμ} = 0`.
    pub fn m(&self, mu: usize, nu: usize) -> FourModeOperator {
        match self.lorentz_entry(mu, nu) {
            Some((g, sign)) => g.xp.scale_real(sign),
            None => FourModeOperator::zero(self.cutoff, ModeBasis::Spacetime),
        }
    }

    pub fn m_ladder(&self, mu: usize, nu: usize) -> FourModeOperator {
        match self.lorentz_entry(mu, nu) {
            Some((g, sign)) => g.ladder.scale_real(sign),
            None => FourModeOperator::zero(self.cutoff, ModeBasis::Spacetime),
        }
    }
}

/// Builds all ten generators in xp-form and ladder-form.
///
/// Rotations: `M₂₃ = ŷp̂_z − ẑp̂_y`, `M₁₃ = ẑp̂_x − x̂p̂_z`, `M₁₂ = x̂p̂_y − ŷp̂_x`,
/// with ladder bilinears `i(â_y†â_z − â_z†â_y)` and cyclic analogues.
/// Boosts: `M₀ᵢ = t̂p̂ᵢ + x̂ᵢp̂_t` with ladder bilinear `i(â_t âᵢ − âᵢ†â_t†)`.
pub fn build_generators(cutoff: Cutoff) -> Result<PoincareGenerators> {
    let ps = build_phase_space(cutoff)?;
    let x = |mu: usize| ps.position(mode_of(mu));
    let p = |mu: usize| ps.momentum(mode_of(mu));
    let a = |mu: usize| ps.annihilator(mode_of(mu)).clone();
    let ad = |mu: usize| ps.annihilator(mode_of(mu)).adjoint();

    let translations = [0, 1, 2, 3].map(|mu| p(mu).clone());
    let translations_ladder =
        [0, 1, 2, 3].map(|mu| (&a(mu) - &ad(mu)).scale(Complex64::new(0.0, -FRAC_1_SQRT_2)));

    // (first, second) such that xp = x_first p_second − x_second p_first and
    // ladder = i(a_first† a_second − a_second† a_first)
    let rotation = |first: usize, second: usize| {
        let xp = &(x(first) * p(second)) - &(x(second) * p(first));
        let ladder = (&(&ad(first) * &a(second)) - &(&ad(second) * &a(first))).scale(I);
        (xp, ladder)
    };
    let boost = |i: usize| {
        let xp = &(x(0) * p(i)) + &(x(i) * p(0));
        let ladder = (&(&a(0) * &a(i)) - &(&ad(i) * &ad(0))).scale(I);
        (xp, ladder)
    };

    let mut lorentz = Vec::with_capacity(6);
    for &(mu, nu) in &LORENTZ_PAIRS {
        let (xp, ladder) = match (mu, nu) {
            (0, i) => boost(i),
            (2, 3) => rotation(2, 3),
            (1, 3) => rotation(3, 1),
            (1, 2) => rotation(1, 2),
            _ => unreachable!("pairs are fixed"),
        };
        lorentz.push(LorentzGenerator { mu, nu, xp, ladder });
    }

    Ok(PoincareGenerators {
        cutoff,
        phase_space: ps,
        translations,
        translations_ladder,
        lorentz,
    })
}

/// Total occupation `Σ_w â_w†â_w`.
pub fn total_number(cutoff: Cutoff) -> Result<FourModeOperator> {
    let n = make_ladder(LadderKind::Number, cutoff);
    let mut total = FourModeOperator::zero(cutoff, ModeBasis::Spacetime);
    for mode in ModeBasis::Spacetime.modes() {
        total = &total + &lift(&n, mode, cutoff)?;
    }
    Ok(total)
}
