use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{build_generators, MetricSignature, PoincareGenerators, LORENTZ_PAIRS};
use crate::error::{Error, Result};
use crate::expm::expm_apply;
use crate::fock::Cutoff;
use crate::linalg::I;
use crate::position_rep::{synthesize, GridSpec};
use crate::tensor4::{check_same_cutoff, FourModeOperator, ModeBasis, StateVector};

/// `a_μ` and antisymmetric `ω_{μν}` (lower indices).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformParameters {
    #[serde(default)]
    pub translation: [f64; 4],
    #[serde(default)]
    pub omega: [[f64; 4]; 4],
}

impl TransformParameters {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn translation(mu: usize, amount: f64) -> Self {
        let mut p = Self::zero();
        p.translation[mu] = amount;
        p
    }

    /// Sets `ω_{μν} = −ω_{νμ} = angle/2`, so the exponent carries
    /// `i·angle·η^{μμ}η^{νν}·M_{μν}` once both orderings are summed.
    pub fn rotation(mu: usize, nu: usize, angle: f64) -> Self {
        let mut p = Self::zero();
        p.omega[mu][nu] = angle / 2.0;
        p.omega[nu][mu] = -angle / 2.0;
        p
    }

    pub fn validate(&self) -> Result<()> {
        if self.translation.iter().chain(self.omega.iter().flatten()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameters("parameters must be finite".into()));
        }
        for mu in 0..4 {
            for nu in 0..4 {
                if self.omega[mu][nu] != -self.omega[nu][mu] {
                    return Err(Error::InvalidParameters(format!(
                        "omega is not antisymmetric at ({mu}, {nu}): {} vs {}",
                        self.omega[mu][nu], self.omega[nu][mu]
                    )));
                }
            }
        }
        Ok(())
    }

    /// `a_μ P^μ + ω_{μν} M^{μν}` with indices raised by `signature`.
    pub fn generator(&self, g: &PoincareGenerators, signature: MetricSignature) -> FourModeOperator {
        let eta = signature.diagonal();
        let mut total = FourModeOperator::zero(g.cutoff(), ModeBasis::Spacetime);
        for mu in 0..4 {
            let a = self.translation[mu];
            if a != 0.0 {
                total = &total + &g.p(mu).scale_real(a * eta[mu]);
            }
        }
        for &(mu, nu) in &LORENTZ_PAIRS {
            let w = self.omega[mu][nu];
            if w != 0.0 {
                total = &total + &g.m(mu, nu).scale_real(2.0 * w * eta[mu] * eta[nu]);
            }
        }
        total
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformOptions {
    pub signature: MetricSignature,
    pub margin: u32,
    /// Largest acceptable fraction of the norm outside the interior.
    pub max_leak: f64,
}

impl Default for TransformOptions {
    fn default() -> Self {
        TransformOptions {
            signature: MetricSignature::MostlyMinus,
            margin: 1,
            max_leak: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransformOutcome {
    pub state: StateVector,
    /// Fraction of the output norm² carried by states outside the interior.
    pub leak: f64,
    /// `‖out‖² − ‖in‖²`.
    pub norm_change: f64,
}

/// `exp(i(a·P + ω·M))|ψ⟩` using the xp-form generators.
pub fn poincare_transform(
    state: &StateVector,
    params: &TransformParameters,
    generators: &PoincareGenerators,
    options: &TransformOptions,
) -> Result<TransformOutcome> {
    check_same_cutoff(generators.cutoff(), state.cutoff())?;
    if state.basis() != ModeBasis::Spacetime {
        return Err(Error::BasisMismatch {
            mode: "state".into(),
            found: state.basis().name(),
            expected: ModeBasis::Spacetime.name(),
        });
    }
    params.validate()?;
    state.cutoff().interior_max(options.margin)?;
    let g = params.generator(generators, options.signature);
    let out = state.with_coeffs(expm_apply(&g, I, state.coeffs()));
    let total = out.norm_sqr();
    let outside = out.norm_outside_interior(options.margin)?;
    let leak = if total > 0.0 { outside / total } else { 0.0 };
    if leak > options.max_leak {
        return Err(Error::NormLeak {
            leak,
            threshold: options.max_leak,
        });
    }
    Ok(TransformOutcome {
        norm_change: total - state.norm_sqr(),
        state: out,
        leak,
    })
}

/// Overlap of a translated vacuum with the analytic shifted Gaussian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftFidelity {
    pub cutoff: u32,
    pub shift: f64,
    pub signature: MetricSignature,
    /// `+1` when the rendered profile sits at `+shift`, `−1` at `−shift`.
    pub direction: i8,
    pub fidelity: f64,
    pub infidelity: f64,
    pub leak: f64,
}

const SLICE_HALF_WIDTH: f64 = 12.0;
const SLICE_STEPS: usize = 2401;

/// `1 − |⟨f|g⟩|²/(‖f‖²‖g‖²)` on sampled vectors, computed through the
/// Lagrange identity so small values keep their relative precision.
fn infidelity(f: &[Complex64], g: &[Complex64]) -> f64 {
    let nf: f64 = f.iter().map(|z| z.norm_sqr()).sum();
    let ng: f64 = g.iter().map(|z| z.norm_sqr()).sum();
    let mut gap = 0.0;
    for i in 0..f.len() {
        for j in i + 1..f.len() {
            gap += (f[i] * g[j] - f[j] * g[i]).norm_sqr();
        }
    }
    gap / (nf * ng)
}

/// Translates the vacuum by `shift` along `x`, renders the `x` slice through
/// the origin and compares it with `exp(−(x ∓ shift)²/2)`.
pub fn shifted_vacuum_fidelity(cutoff: Cutoff, shift: f64, signature: MetricSignature) -> Result<ShiftFidelity> {
    let g = build_generators(cutoff)?;
    let vacuum = StateVector::vacuum(cutoff, ModeBasis::Spacetime);
    let options = TransformOptions {
        signature,
        ..TransformOptions::default()
    };
    let out = poincare_transform(&vacuum, &TransformParameters::translation(1, shift), &g, &options)?;
    let grid = GridSpec::x_line(-SLICE_HALF_WIDTH, SLICE_HALF_WIDTH, SLICE_STEPS)?;
    let rendered = synthesize(&out.state, &grid)?;
    let xs = grid.x.values();
    let gaussian = |centre: f64| -> Vec<Complex64> {
        xs.iter()
            .map(|x| Complex64::new((-(x - centre) * (x - centre) / 2.0).exp(), 0.0))
            .collect()
    };
    let plus = infidelity(&rendered.samples, &gaussian(shift));
    let minus = infidelity(&rendered.samples, &gaussian(-shift));
    let (direction, inf) = if plus <= minus { (1, plus) } else { (-1, minus) };
    Ok(ShiftFidelity {
        cutoff: cutoff.n_max(),
        shift,
        signature,
        direction,
        fidelity: 1.0 - inf,
        infidelity: inf,
        leak: out.leak,
    })
}
