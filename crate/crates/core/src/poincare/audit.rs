//! Numerical audit of the Poincaré commutator algebra.
//!
//! Every relation is measured as `‖P(lhs − s·rhs)P‖_F` on the interior
//! subspace for both `s = +1` and `s = −1`; the report keeps the smaller
//! residual and the sign that produced it. Nothing about the printed sign
//! conventions is assumed.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{MetricSignature, PoincareGenerators, LORENTZ_PAIRS};
use crate::error::{Error, Result};
use crate::linalg::{self, SparseMatrix, I};
use crate::tensor4::{deindex_unchecked, FourModeOperator, ModeBasis};

/// Boosts change the total occupation by two, so two boundary layers are excluded.
pub const MIN_AUDIT_MARGIN: u32 = 2;

/// Residuals closer than this count as a tie, resolved in favour of `+1`.
pub const SIGN_TIE_TOLERANCE: f64 = 1e-12;

pub const TRANSLATION_TOLERANCE: f64 = 1e-14;
pub const HEISENBERG_TOLERANCE: f64 = 1e-12;
pub const FORM_TOLERANCE: f64 = 1e-12;
pub const ROTATION_TOLERANCE: f64 = 1e-10;

pub const REPORT_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    /// `[q̂_i, p̂_j] = iδ_ij`
    Heisenberg,
    /// `[P_μ, P_ν] = 0`
    Translation,
    /// `[M_μν, P_ρ]`
    LorentzTranslation,
    /// `[M_μν, M_ρσ]` with both generators rotations
    Rotation,
    /// `[M_μν, M_ρσ]` involving a boost
    Lorentz,
    /// ladder-form `M_μν` against xp-form `M_μν`
    Form,
    /// `[J_i, J_j] = iε_ijk J_k` with `J = (M_23, M_13, M_12)`
    RotationClosure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub relation: RelationKind,
    pub lhs: String,
    pub rhs: String,
    pub signature: MetricSignature,
    pub best_sign: i8,
    pub residual: f64,
    pub margin: u32,
    pub cutoff: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraAuditReport {
    pub format_version: u32,
    pub cutoff: u32,
    pub margin: u32,
    pub signature: MetricSignature,
    pub entries: Vec<AuditEntry>,
}

impl AlgebraAuditReport {
    pub fn of_kind(&self, kind: RelationKind) -> impl Iterator<Item = &AuditEntry> {
        self.entries.iter().filter(move |e| e.relation == kind)
    }

    pub fn find(&self, lhs: &str) -> Option<&AuditEntry> {
        self.entries.iter().find(|e| e.lhs == lhs)
    }

    /// The sectors that hold exactly (up to recorded signs) and so gate a run.
    pub fn gate(&self) -> Vec<GateCheck> {
        let worst = |kind| self.of_kind(kind).map(|e| e.residual).fold(0.0, f64::max);

        let translation = worst(RelationKind::Translation);
        let heisenberg = worst(RelationKind::Heisenberg);
        let heisenberg_signs = self.of_kind(RelationKind::Heisenberg).all(|e| e.best_sign == 1);
        let form = worst(RelationKind::Form);
        let rotation = worst(RelationKind::Rotation).max(worst(RelationKind::RotationClosure));
        let rotation_signs: Vec<i8> = self.of_kind(RelationKind::RotationClosure).map(|e| e.best_sign).collect();
        let rotation_consistent = !rotation_signs.is_empty() && rotation_signs.windows(2).all(|w| w[0] == w[1]);

        vec![
            GateCheck {
                name: "translation".into(),
                passed: translation <= TRANSLATION_TOLERANCE,
                detail: format!("max residual {translation:e} (tolerance {TRANSLATION_TOLERANCE:e})"),
            },
            GateCheck {
                name: "heisenberg".into(),
                passed: heisenberg < HEISENBERG_TOLERANCE && heisenberg_signs,
                detail: format!(
                    "max residual {heisenberg:e} (tolerance {HEISENBERG_TOLERANCE:e}), all signs +1: {heisenberg_signs}"
                ),
            },
            GateCheck {
                name: "form".into(),
                passed: form < FORM_TOLERANCE,
                detail: format!("max residual {form:e} (tolerance {FORM_TOLERANCE:e})"),
            },
            GateCheck {
                name: "rotation_closure".into(),
                passed: rotation < ROTATION_TOLERANCE && rotation_consistent,
                detail: format!(
                    "max residual {rotation:e} (tolerance {ROTATION_TOLERANCE:e}), signs {rotation_signs:?}"
                ),
            },
        ]
    }

    pub fn passed(&self) -> bool {
        self.gate().iter().all(|c| c.passed)
    }
}

/// A right-hand side `Σ cₖ·Gₖ` kept alongside a readable rendering.
struct Combination {
    terms: Vec<(Complex64, String, FourModeOperator)>,
}

impl Combination {
    fn zero() -> Self {
        Combination { terms: Vec::new() }
    }

    fn push(&mut self, coeff: Complex64, name: String, op: FourModeOperator) {
        if coeff != linalg::ZERO {
            self.terms.push((coeff, name, op));
        }
    }

    fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (c, name, _)) in self.terms.iter().enumerate() {
            // coefficients are ±1 or ±i
            let (neg, unit) = if c.im != 0.0 { (c.im < 0.0, "i") } else { (c.re < 0.0, "") };
            let sep = match (k, neg) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            let body = match (unit, name.is_empty()) {
                ("", true) => "1".to_string(),
                ("", false) => name.clone(),
                (u, true) => u.to_string(),
                (u, false) => format!("{u} {name}"),
            };
            out.push_str(sep);
            out.push_str(&body);
        }
        out
    }

    fn operator(&self, zero: FourModeOperator) -> FourModeOperator {
        self.terms
            .iter()
            .fold(zero, |acc, (c, _, op)| &acc + &op.scale(*c))
    }
}

enum Relation {
    Heisenberg(usize, usize),
    Translation(usize, usize),
    LorentzTranslation(usize, usize),
    LorentzLorentz(usize, usize),
    Form(usize),
    /// cyclic position `k` of `[J_i, J_j] = iJ_l`
    RotationClosure(usize),
}

/// `(μ, ν)` of `J_1 = M_23, J_2 = M_13, J_3 = M_12`; with `M_13 = ẑp̂_x − x̂p̂_z`
/// these are the components of `x̂ × p̂`.
const ROTATION_AXES: [(usize, usize); 3] = [(2, 3), (1, 3), (1, 2)];

fn pname(mu: usize) -> String {
    format!("P_{mu}")
}

fn mname(mu: usize, nu: usize) -> String {
    format!("M_{mu}{nu}")
}

/// `(coefficient, canonical name, operator)` for `M_{μν}` with arbitrary order.
fn m_term(g: &PoincareGenerators, mu: usize, nu: usize, coeff: Complex64) -> Option<(Complex64, String, FourModeOperator)> {
    if mu == nu {
        return None;
    }
    let (lo, hi, sign) = if mu < nu { (mu, nu, 1.0) } else { (nu, mu, -1.0) };
    Some((coeff * sign, mname(lo, hi), g.m(lo, hi)))
}

struct Evaluated {
    relation: RelationKind,
    lhs_name: String,
    rhs: Combination,
    lhs: FourModeOperator,
}

fn evaluate(rel: &Relation, g: &PoincareGenerators, eta: MetricSignature) -> Evaluated {
    let ps = g.phase_space();
    let spacetime_name = ["x", "y", "z", "t"];
    match *rel {
        Relation::Heisenberg(i, j) => {
            let modes = ModeBasis::Spacetime.modes();
            let lhs = ps.position(modes[i]).commutator(ps.momentum(modes[j]));
            let mut rhs = Combination::zero();
            if i == j {
                rhs.push(I, String::new(), FourModeOperator::identity(g.cutoff(), ModeBasis::Spacetime));
            }
            Evaluated {
                relation: RelationKind::Heisenberg,
                lhs_name: format!("[{}, p_{}]", spacetime_name[i], spacetime_name[j]),
                rhs,
                lhs,
            }
        }
        Relation::Translation(mu, nu) => Evaluated {
            relation: RelationKind::Translation,
            lhs_name: format!("[{}, {}]", pname(mu), pname(nu)),
            rhs: Combination::zero(),
            lhs: g.p(mu).commutator(g.p(nu)),
        },
        Relation::LorentzTranslation(k, rho) => {
            let (mu, nu) = LORENTZ_PAIRS[k];
            // [M_μν, P_ρ] = iη_μρ P_ν − iη_νρ P_μ
            let mut rhs = Combination::zero();
            rhs.push(I * eta.eta(mu, rho), pname(nu), g.p(nu).clone());
            rhs.push(-I * eta.eta(nu, rho), pname(mu), g.p(mu).clone());
            Evaluated {
                relation: RelationKind::LorentzTranslation,
                lhs_name: format!("[{}, {}]", mname(mu, nu), pname(rho)),
                rhs,
                lhs: g.m(mu, nu).commutator(g.p(rho)),
            }
        }
        Relation::LorentzLorentz(k, l) => {
            let (mu, nu) = LORENTZ_PAIRS[k];
            let (rho, sigma) = LORENTZ_PAIRS[l];
            // [M_μν, M_ρσ] = −iη_μρ M_νσ + iη_μσ M_νρ − iη_νρ M_μσ + iη_νσ M_μρ
            let mut rhs = Combination::zero();
            let parts = [
                (-I * eta.eta(mu, rho), nu, sigma),
                (I * eta.eta(mu, sigma), nu, rho),
                (-I * eta.eta(nu, rho), mu, sigma),
                (I * eta.eta(nu, sigma), mu, rho),
            ];
            for (c, a, b) in parts {
                if c == linalg::ZERO {
                    continue;
                }
                if let Some((c, name, op)) = m_term(g, a, b, c) {
                    rhs.push(c, name, op);
                }
            }
            let relation = if mu > 0 && rho > 0 {
                RelationKind::Rotation
            } else {
                RelationKind::Lorentz
            };
            Evaluated {
                relation,
                lhs_name: format!("[{}, {}]", mname(mu, nu), mname(rho, sigma)),
                rhs,
                lhs: g.m(mu, nu).commutator(&g.m(rho, sigma)),
            }
        }
        Relation::RotationClosure(k) => {
            let [(a, b), (c, d), (e, f)] = [0, 1, 2].map(|s| ROTATION_AXES[(k + s) % 3]);
            let mut rhs = Combination::zero();
            rhs.push(I, mname(e, f), g.m(e, f));
            Evaluated {
                relation: RelationKind::RotationClosure,
                lhs_name: format!("[{}, {}]", mname(a, b), mname(c, d)),
                rhs,
                lhs: g.m(a, b).commutator(&g.m(c, d)),
            }
        }
        Relation::Form(k) => {
            let (mu, nu) = LORENTZ_PAIRS[k];
            let mut rhs = Combination::zero();
            rhs.push(linalg::ONE, format!("{} (xp-form)", mname(mu, nu)), g.m(mu, nu));
            Evaluated {
                relation: RelationKind::Form,
                lhs_name: format!("{} (ladder-form)", mname(mu, nu)),
                rhs,
                lhs: g.m_ladder(mu, nu),
            }
        }
    }
}

/// Picks `s ∈ {+1, −1}` minimizing `‖P(lhs − s·rhs)P‖_F`; near-ties go to `+1`.
fn fit_sign(lhs: &SparseMatrix, rhs: &SparseMatrix, keep: impl Fn(usize) -> bool + Copy) -> (i8, f64) {
    let plus = linalg::masked_frobenius(&(lhs - rhs), keep);
    let minus = linalg::masked_frobenius(&(lhs + rhs), keep);
    if (plus - minus).abs() <= SIGN_TIE_TOLERANCE || plus <= minus {
        (1, plus)
    } else {
        (-1, minus)
    }
}

fn check_margin(g: &PoincareGenerators, margin: u32) -> Result<u32> {
    if margin < MIN_AUDIT_MARGIN {
        return Err(Error::MarginTooSmall {
            margin,
            required: MIN_AUDIT_MARGIN,
        });
    }
    g.cutoff().interior_max(margin)
}

fn run(g: &PoincareGenerators, signature: MetricSignature, margin: u32, relations: Vec<Relation>) -> Result<Vec<AuditEntry>> {
    let top = check_margin(g, margin)?;
    let d = g.cutoff().mode_dim();
    let keep = move |i: usize| deindex_unchecked(i, d).iter().all(|&n| n <= top);
    let zero = FourModeOperator::zero(g.cutoff(), ModeBasis::Spacetime);
    Ok(relations
        .par_iter()
        .map(|rel| {
            let ev = evaluate(rel, g, signature);
            let lhs = ev.lhs.materialize();
            let rhs = ev.rhs.operator(zero.clone()).materialize();
            let (best_sign, residual) = fit_sign(&lhs, &rhs, keep);
            AuditEntry {
                relation: ev.relation,
                lhs: ev.lhs_name,
                rhs: ev.rhs.render(),
                signature,
                best_sign,
                residual,
                margin,
                cutoff: g.cutoff().n_max(),
            }
        })
        .collect())
}

fn form_relations() -> Vec<Relation> {
    (0..LORENTZ_PAIRS.len()).map(Relation::Form).collect()
}

/// Ladder-form against xp-form for each `M_μν`.
pub fn audit_forms(g: &PoincareGenerators, margin: u32) -> Result<Vec<AuditEntry>> {
    run(g, MetricSignature::MostlyMinus, margin, form_relations())
}

/// Measures 16 Heisenberg pairs, 6 `[P,P]`, 24 `[M,P]`, 15 `[M,M]`, the
/// 3 rotation-closure relations in cyclic form and the 6 form comparisons
/// for one metric signature.
pub fn audit_algebra(g: &PoincareGenerators, signature: MetricSignature, margin: u32) -> Result<AlgebraAuditReport> {
    let mut relations = Vec::with_capacity(70);
    for i in 0..4 {
        for j in 0..4 {
            relations.push(Relation::Heisenberg(i, j));
        }
    }
    for mu in 0..4 {
        for nu in mu + 1..4 {
            relations.push(Relation::Translation(mu, nu));
        }
    }
    for k in 0..LORENTZ_PAIRS.len() {
        for rho in 0..4 {
            relations.push(Relation::LorentzTranslation(k, rho));
        }
    }
    for k in 0..LORENTZ_PAIRS.len() {
        for l in k + 1..LORENTZ_PAIRS.len() {
            relations.push(Relation::LorentzLorentz(k, l));
        }
    }
    relations.extend((0..3).map(Relation::RotationClosure));
    relations.extend(form_relations());
    let entries = run(g, signature, margin, relations)?;
    Ok(AlgebraAuditReport {
        format_version: REPORT_FORMAT_VERSION,
        cutoff: g.cutoff().n_max(),
        margin,
        signature,
        entries,
    })
}
