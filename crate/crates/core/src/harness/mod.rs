//! Scenario configs, experiment runners and CSV/JSON reports.
//!
//! Every runner takes a validated [`ScenarioConfig`] and returns a
//! [`Report`]; writing to disk is left to [`Report::write`]. A run is a pure
//! function of the config (seed included), so report files are
//! byte-reproducible.

mod common;
mod config;
mod convergence;
mod report;
mod scenario;
mod solve;
mod symbols;
mod witness;

pub use common::{NormSeries, TraceNorms};
pub use config::{
    DataSpec, ExperimentKind, ForcingGen, ManufacturedSpec, OutputSpec, ScenarioConfig, SpaceGen,
    SymbolSpec, TimeSpec, Tolerances,
};
pub use convergence::{mgt_residual, run_convergence};
pub use report::{drift, observed_order, Report, ReportRow, Status, Table};
pub use scenario::{
    boundary_regularity, build_scenario, data_regularity, manufactured_solution, random_data_spec,
    Scenario,
};
pub use solve::{run_compare_oracle, run_solve, SolveRun};
pub use symbols::{run_symbol_suite, ProbePair};
pub use witness::{run_regularity_witness, LevelStats};

use crate::Result;

/// Runs one experiment and returns its report.
pub fn run_experiment(kind: ExperimentKind, cfg: &ScenarioConfig) -> Result<Report> {
    match kind {
        ExperimentKind::Solve => run_solve(cfg).map(|r| r.0),
        ExperimentKind::Witness => run_regularity_witness(cfg).map(|r| r.0),
        ExperimentKind::Convergence => run_convergence(cfg),
        ExperimentKind::Symbols => run_symbol_suite(cfg),
        ExperimentKind::CompareOracle => run_compare_oracle(cfg),
    }
}
