use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mgt_core::harness::{run_experiment, ExperimentKind, ScenarioConfig};
use mgt_core::Error;

/// Experiment runner for the MGT numerical lab.
///
/// Exit status: 0 when every check passes, 1 when a check fails or a solver
/// reports an error, 2 when the configuration is invalid.
#[derive(Debug, Parser)]
#[command(name = "mgt-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve each (N, dt) level and write norm and trace time series.
    Solve(Common),
    /// Refinement witnesses for interior and trace regularity.
    Witness(Common),
    /// Observed orders in dt and truncation decay in N.
    Convergence(Common),
    /// Lopatinskii sweeps, stability threshold scan and estimate probes.
    Symbols(Common),
    /// Relative gap between the Volterra route and the ODE oracle.
    CompareOracle(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// JSON scenario config; the experiment's preset is used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for CSV tables and the JSON summary.
    #[arg(long, default_value = "mgt-out")]
    out: PathBuf,
    /// Comma-separated mode counts, replacing the config's list.
    #[arg(long, value_delimiter = ',')]
    modes: Option<Vec<usize>>,
    /// Comma-separated step sizes, replacing the config's ladder.
    #[arg(long, value_delimiter = ',')]
    dt: Option<Vec<f64>>,
    #[arg(long)]
    seed: Option<u64>,
    /// Either a number for the experiment's headline tolerance or
    /// `name=value` for a named one; may be repeated.
    #[arg(long)]
    tol: Vec<String>,
}

impl Command {
    fn split(&self) -> (ExperimentKind, &Common) {
        match self {
            Command::Solve(c) => (ExperimentKind::Solve, c),
            Command::Witness(c) => (ExperimentKind::Witness, c),
            Command::Convergence(c) => (ExperimentKind::Convergence, c),
            Command::Symbols(c) => (ExperimentKind::Symbols, c),
            Command::CompareOracle(c) => (ExperimentKind::CompareOracle, c),
        }
    }
}

fn parse_value(s: &str) -> Result<f64, Error> {
    s.trim().parse().map_err(|_| Error::Config(format!("`{s}` is not a number")))
}

fn build_config(kind: ExperimentKind, args: &Common) -> Result<ScenarioConfig, Error> {
    let mut cfg = match &args.config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::preset(kind),
    };
    if let Some(m) = &args.modes {
        cfg.modes = m.clone();
    }
    if let Some(dt) = &args.dt {
        cfg.time.dt = dt.clone();
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    for t in &args.tol {
        match t.split_once('=') {
            Some((name, v)) => cfg.tolerances.set(name.trim(), parse_value(v)?)?,
            None => cfg.tolerances.set_primary(kind, parse_value(t)?),
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_error(out: &Path, e: &Error) {
    let record = serde_json::json!({"error": e.code(), "message": e.to_string()});
    let _ = std::fs::create_dir_all(out);
    let _ = std::fs::write(out.join("error.json"), format!("{record:#}\n"));
    eprintln!("error: {e}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = cli.command.split();
    let cfg = match build_config(kind, args) {
        Ok(c) => c,
        Err(e) => {
            write_error(&args.out, &e);
            return ExitCode::from(2);
        }
    };
    let report = match run_experiment(kind, &cfg) {
        Ok(r) => r,
        Err(e) => {
            write_error(&args.out, &e);
            return ExitCode::from(if matches!(e, Error::Config(_)) { 2 } else { 1 });
        }
    };
    if let Err(e) = report.write(&args.out) {
        write_error(&args.out, &e);
        return ExitCode::from(1);
    }
    for row in &report.rows {
        println!(
            "{:<14} {:<32} {:<36} {:>14.6e} {:?}",
            row.experiment, row.level, row.norm, row.value, row.status
        );
    }
    let code = report.exit_code();
    println!("{}: {}", report.experiment, if code == 0 { "PASS" } else { "FAIL" });
    ExitCode::from(code as u8)
}
