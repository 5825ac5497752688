use std::process::ExitCode;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use urfield_core::poincare::{
    audit_algebra, poincare_transform, AlgebraAuditReport, GateCheck, TransformOptions, TransformParameters,
};
use urfield_core::position_rep::{parseval_check, synthesize, GridSpec, ParsevalSummary, SpacetimePoint};
use urfield_core::second_quant::{propagator_csv, propagator_direct, propagator_vev, ModeSet};
use urfield_core::tensor4::{state_from_json, state_to_json};
use urfield_core::{build_generators, MetricSignature, ModeBasis};

use crate::config::{CliError, RunConfig, EXIT_TOLERANCE};
use crate::output::{parse_points, read_text, sidecar, write_atomic, write_json};
use crate::{AuditArgs, PropagatorArgs, TransformArgs, WavefunctionArgs};

pub const FORMAT_VERSION: u32 = 1;
pub const PARSEVAL_TOLERANCE: f64 = 1e-8;
pub const PROPAGATOR_TOLERANCE: f64 = 1e-12;
const RANDOM_POINT_RANGE: f64 = 2.0;

#[derive(Debug, Serialize)]
struct SignatureGate {
    signature: MetricSignature,
    passed: bool,
    checks: Vec<GateCheck>,
}

#[derive(Debug, Serialize)]
struct Failure {
    signature: MetricSignature,
    check: String,
    detail: String,
}

#[derive(Debug, Serialize)]
struct AuditDocument {
    format_version: u32,
    cutoff: u32,
    margin: u32,
    passed: bool,
    failures: Vec<Failure>,
    gates: Vec<SignatureGate>,
    reports: Vec<AlgebraAuditReport>,
}

fn tolerance_exit(failures: &impl Serialize) -> ExitCode {
    eprintln!("{}", serde_json::to_string(failures).expect("failure list serializes"));
    ExitCode::from(EXIT_TOLERANCE)
}

pub fn audit(a: AuditArgs) -> Result<ExitCode, CliError> {
    let mut cfg = RunConfig::new(a.cutoff, a.out);
    cfg.margin = Some(a.margin);
    cfg.signature = a.signature;
    cfg.validate()?;
    let g = build_generators(cfg.fock_cutoff()?)?;
    let signatures = match cfg.signature {
        Some(s) => vec![s],
        None => MetricSignature::ALL.to_vec(),
    };
    let mut reports = Vec::with_capacity(signatures.len());
    for s in signatures {
        reports.push(audit_algebra(&g, s, a.margin)?);
    }
    let gates: Vec<SignatureGate> = reports
        .iter()
        .map(|r| {
            let checks = r.gate();
            SignatureGate {
                signature: r.signature,
                passed: checks.iter().all(|c| c.passed),
                checks,
            }
        })
        .collect();
    let failures: Vec<Failure> = gates
        .iter()
        .flat_map(|g| {
            g.checks.iter().filter(|c| !c.passed).map(|c| Failure {
                signature: g.signature,
                check: c.name.clone(),
                detail: c.detail.clone(),
            })
        })
        .collect();
    let doc = AuditDocument {
        format_version: FORMAT_VERSION,
        cutoff: cfg.cutoff,
        margin: a.margin,
        passed: failures.is_empty(),
        failures,
        gates,
        reports,
    };
    write_json(&cfg.out, &doc)?;
    if !doc.passed {
        return Ok(tolerance_exit(&doc.failures));
    }
    Ok(ExitCode::SUCCESS)
}

pub fn wavefunction(a: WavefunctionArgs) -> Result<ExitCode, CliError> {
    let mut cfg = RunConfig::new(a.cutoff, a.out);
    cfg.quadrature_order = a.quadrature_order;
    cfg.input = vec![a.state.clone()];
    let cutoff = cfg.fock_cutoff()?;
    cfg.validate()?;
    let grid = GridSpec::new([a.x, a.y, a.z, a.t])?;
    let state = state_from_json(&read_text(&a.state)?, cutoff, ModeBasis::Spacetime)?;
    let rendered = synthesize(&state, &grid)?;
    let parseval = match cfg.quadrature_order {
        Some(q) => {
            let (coefficient_norm_sqr, quadrature_norm_sqr) = parseval_check(&state, q)?;
            Some(ParsevalSummary {
                quadrature_order: q,
                coefficient_norm_sqr,
                quadrature_norm_sqr,
            })
        }
        None => None,
    };
    write_atomic(&cfg.out, &rendered.to_csv())?;
    let meta = rendered.metadata(state.norm_sqr(), parseval.clone());
    write_json(&sidecar(&cfg.out, ".meta.json"), &meta)?;
    if let Some(p) = parseval {
        let gap = (p.coefficient_norm_sqr - p.quadrature_norm_sqr).abs();
        if gap > PARSEVAL_TOLERANCE {
            return Ok(tolerance_exit(&[format!("parseval gap {gap:e} exceeds {PARSEVAL_TOLERANCE:e}")]));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn random_pairs(n: usize, seed: u64) -> Vec<(SpacetimePoint, SpacetimePoint)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut point = || SpacetimePoint::from_array([(); 4].map(|_| rng.random_range(-RANDOM_POINT_RANGE..=RANDOM_POINT_RANGE)));
    (0..n).map(|_| (point(), point())).collect()
}

pub fn propagator(a: PropagatorArgs) -> Result<ExitCode, CliError> {
    let mut cfg = RunConfig::new(a.cutoff, a.out);
    cfg.particle_cap = Some(a.particle_cap);
    cfg.seed = a.seed;
    cfg.input = a.points.iter().cloned().collect();
    cfg.validate()?;
    let pairs = match (&a.points, a.random) {
        (Some(path), _) => parse_points(&read_text(path)?)?,
        (None, Some(0)) => return Err(CliError::Input("--random needs at least one pair".into())),
        (None, Some(n)) => random_pairs(n, cfg.seed),
        (None, None) => unreachable!("clap requires --points or --random"),
    };
    let modes = ModeSet::new(cfg.cutoff);
    let mut rows = Vec::with_capacity(pairs.len());
    let mut worst: f64 = 0.0;
    for (x, x2) in &pairs {
        let direct = propagator_direct(x, x2, modes);
        let vev = propagator_vev(x, x2, modes, a.particle_cap)?;
        worst = worst.max((direct.delta - vev.delta).norm());
        rows.push(direct);
    }
    let mut csv = propagator_csv(&rows);
    csv.push_str(&format!("# max_abs_discrepancy: {worst}\n"));
    write_atomic(&cfg.out, &csv)?;
    println!("max |direct - vev| = {worst}");
    if worst > PROPAGATOR_TOLERANCE {
        return Ok(tolerance_exit(&[format!(
            "max discrepancy {worst:e} exceeds {PROPAGATOR_TOLERANCE:e}"
        )]));
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Debug, Serialize)]
struct TransformReport {
    format_version: u32,
    cutoff: u32,
    signature: MetricSignature,
    margin: u32,
    max_leak: f64,
    leak: f64,
    norm_change: f64,
    parameters: TransformParameters,
}

pub fn transform(a: TransformArgs) -> Result<ExitCode, CliError> {
    let mut cfg = RunConfig::new(a.cutoff, a.out);
    cfg.margin = Some(a.margin);
    cfg.signature = Some(a.signature);
    cfg.input = vec![a.state.clone(), a.params.clone()];
    cfg.validate()?;
    if !(a.max_leak.is_finite() && a.max_leak > 0.0 && a.max_leak <= 1.0) {
        return Err(CliError::Input(format!("--max-leak must lie in (0, 1], got {}", a.max_leak)));
    }
    let cutoff = cfg.fock_cutoff()?;
    let state = state_from_json(&read_text(&a.state)?, cutoff, ModeBasis::Spacetime)?;
    let params: TransformParameters = serde_json::from_str(&read_text(&a.params)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", a.params.display())))?;
    let g = build_generators(cutoff)?;
    let options = TransformOptions {
        signature: a.signature,
        margin: a.margin,
        max_leak: a.max_leak,
    };
    let outcome = poincare_transform(&state, &params, &g, &options)?;
    write_atomic(&cfg.out, &state_to_json(&outcome.state))?;
    write_json(
        &sidecar(&cfg.out, ".report.json"),
        &TransformReport {
            format_version: FORMAT_VERSION,
            cutoff: cfg.cutoff,
            signature: a.signature,
            margin: a.margin,
            max_leak: a.max_leak,
            leak: outcome.leak,
            norm_change: outcome.norm_change,
            parameters: params,
        },
    )?;
    Ok(ExitCode::SUCCESS)
}
