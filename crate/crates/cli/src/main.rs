use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use urfield_core::position_rep::AxisSpec;
use urfield_core::MetricSignature;

mod commands;
mod config;
mod output;

use config::CliError;

#[derive(Debug, Parser)]
#[command(name = "urfield", version, about = "Audits and tables for the four-mode tensor-space field")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Measure the generator algebra and write a JSON report.
    Audit(AuditArgs),
    /// Render a state file as Ψ(X) on a grid (CSV plus metadata sidecar).
    Wavefunction(WavefunctionArgs),
    /// Tabulate Δ(X, X′) by mode sum and by vacuum expectation value.
    Propagator(PropagatorArgs),
    /// Apply exp(i(a·P + ω·M)) to a state file.
    Transform(TransformArgs),
}

#[derive(Debug, Args)]
struct AuditArgs {
    /// Per-mode occupation cutoff n_max.
    #[arg(long, default_value_t = 4)]
    cutoff: u32,
    /// Layers excluded at the top of each mode.
    #[arg(long, default_value_t = 2)]
    margin: u32,
    /// Audit only this signature; both are audited when omitted.
    #[arg(long, value_parser = parse_signature, allow_hyphen_values = true)]
    signature: Option<MetricSignature>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct WavefunctionArgs {
    #[arg(long)]
    cutoff: u32,
    /// JSON list of {modes, re, im} records.
    #[arg(long)]
    state: PathBuf,
    /// `MIN:MAX:STEPS` or a fixed value.
    #[arg(long, default_value = "0", value_parser = parse_axis, allow_hyphen_values = true)]
    x: AxisSpec,
    #[arg(long, default_value = "0", value_parser = parse_axis, allow_hyphen_values = true)]
    y: AxisSpec,
    #[arg(long, default_value = "0", value_parser = parse_axis, allow_hyphen_values = true)]
    z: AxisSpec,
    #[arg(long, default_value = "0", value_parser = parse_axis, allow_hyphen_values = true)]
    t: AxisSpec,
    /// Add a Gauss–Hermite Parseval check of this order to the sidecar.
    #[arg(long)]
    quadrature_order: Option<usize>,
    /// CSV path; metadata goes to `<out>.meta.json`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct PropagatorArgs {
    /// Largest occupation per mode label (0 allowed).
    #[arg(long)]
    cutoff: u32,
    #[arg(long, default_value_t = 1)]
    particle_cap: u32,
    /// CSV of `x,y,z,t,x2,y2,z2,t2` rows.
    #[arg(long, conflicts_with = "random", required_unless_present = "random")]
    points: Option<PathBuf>,
    /// Draw this many point pairs uniformly from [-2, 2]^8.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct TransformArgs {
    #[arg(long)]
    cutoff: u32,
    #[arg(long)]
    state: PathBuf,
    /// JSON `{translation: [a0..a3], omega: [[..4]; 4]}` with lower indices.
    #[arg(long)]
    params: PathBuf,
    #[arg(long, default_value = "+---", value_parser = parse_signature, allow_hyphen_values = true)]
    signature: MetricSignature,
    #[arg(long, default_value_t = 1)]
    margin: u32,
    #[arg(long, default_value_t = 1e-3)]
    max_leak: f64,
    /// Output state JSON; the transform report goes to `<out>.report.json`.
    #[arg(long)]
    out: PathBuf,
}

fn parse_signature(s: &str) -> Result<MetricSignature, String> {
    s.parse()
}

fn parse_axis(s: &str) -> Result<AxisSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}"));
    match parts.as_slice() {
        [v] => Ok(AxisSpec::fixed(num(v)?)),
        [lo, hi, steps] => {
            let steps = steps.trim().parse::<usize>().map_err(|e| format!("{steps:?}: {e}"))?;
            Ok(AxisSpec::range(num(lo)?, num(hi)?, steps))
        }
        _ => Err(format!("expected VALUE or MIN:MAX:STEPS, got {s:?}")),
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Audit(a) => commands::audit(a),
        Command::Wavefunction(a) => commands::wavefunction(a),
        Command::Propagator(a) => commands::propagator(a),
        Command::Transform(a) => commands::transform(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
