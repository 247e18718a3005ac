use super::common::{
    experiment_id, level_label, oracle_bundle, relative_error_series, solve_level, NormSeries,
    TraceNorms,
};
use super::config::{ExperimentKind, ScenarioConfig};
use super::report::{Report, Status, Table};
use crate::oracle::oracle_solve;
use crate::par::{self, Execution};
use crate::reduction::SolutionBundle;
use crate::{Error, Result};

/// One refinement level of [`run_solve`].
#[derive(Debug, Clone)]
pub struct SolveRun {
    pub modes: usize,
    pub dt: f64,
    pub bundle: SolutionBundle,
    pub norms: NormSeries,
    pub oracle_norms: NormSeries,
    /// Missing when the normal-trace series failed its convergence test.
    pub traces: Option<TraceNorms>,
}

/// Solves every `(N, dt)` level and tabulates the interior norms and the
/// normal trace of `w` over time, cross-checking sup-norms against the
/// oracle.
pub fn run_solve(cfg: &ScenarioConfig) -> Result<(Report, Vec<SolveRun>)> {
    let id = experiment_id(cfg, ExperimentKind::Solve);
    let tol = &cfg.tolerances;
    let levels = cfg.levels();
    let runs = par::try_map_indexed(Execution::Auto, levels.len(), |i| {
        let (n, dt) = levels[i];
        let (sc, bundle) = solve_level(cfg, n, dt)?;
        let norms = NormSeries::of(&bundle, cfg.output.stride)?;
        let oracle = oracle_solve(&sc.data, &sc.params, Execution::Auto)?;
        let oracle_norms = NormSeries::of(&oracle_bundle(&bundle, &oracle), cfg.output.stride)?;
        let traces = TraceNorms::of(&bundle).ok();
        Ok::<_, Error>(SolveRun { modes: n, dt, bundle, norms, oracle_norms, traces })
    })?;

    let mut report = Report::new(&id);
    for run in &runs {
        let level = level_label(run.modes, run.dt);
        let names = ["sup_w_h2", "sup_wt_h1", "sup_wtt_l2"];
        for ((name, v), r) in names.iter().zip(run.norms.sups()).zip(run.oracle_norms.sups()) {
            let gap = super::report::drift(v, r);
            report.row(&level, *name, v, Some(r), Some(tol.oracle_norm), Status::from_check(gap <= tol.oracle_norm));
        }
        let mut header = vec!["t", "w_h2", "wt_h1", "wtt_l2"];
        let node_names: Vec<String> =
            (0..run.bundle.g.node_count()).map(|n| format!("dn_w_{n}")).collect();
        match &run.traces {
            Some(tr) => {
                header.extend(node_names.iter().map(String::as_str));
                report.info(&level, "dn_w_h1_sigma", tr.dn_w_h1);
                report.info(&level, "dn_wt_l2_sigma", tr.dn_wt_l2);
            }
            None => report.row(&level, "dn_w_h1_sigma", f64::NAN, None, None, Status::Flagged),
        }
        let mut table = Table::new(format!("{id}_N{}_dt{:e}", run.modes, run.dt), &header);
        let dt = run.bundle.w.grid().dt();
        for (i, t) in run.norms.t.iter().enumerate() {
            let mut row = vec![*t, run.norms.w_h2[i], run.norms.wt_h1[i], run.norms.wtt_l2[i]];
            if let Some(tr) = &run.traces {
                let m = (t / dt).round() as usize;
                row.extend(tr.dn_w.iter().map(|s| s[m]));
            }
            table.rows.push(row);
        }
        report.tables.push(table);
    }

    if !runs.is_empty() && !runs[0].bundle.compat.all() {
        let dt0 = cfg.time.dt[0];
        let ladder: Vec<&SolveRun> = runs.iter().filter(|r| r.dt == dt0).collect();
        for pair in ladder.windows(2) {
            let growth = pair[1].norms.sups()[0] / pair[0].norms.sups()[0];
            let ok = growth >= tol.divergence_factor;
            report.row(
                format!("N={}->{}", pair[0].modes, pair[1].modes),
                "divergence_growth_w_h2",
                growth,
                None,
                Some(tol.divergence_factor),
                if ok { Status::ExpectedFail } else { Status::Fail },
            );
        }
    }
    report.note("config", cfg);
    report.note(
        "sup_norms",
        runs.iter()
            .map(|r| serde_json::json!({"modes": r.modes, "dt": r.dt, "sup": r.norms.sups(), "oracle_sup": r.oracle_norms.sups()}))
            .collect::<Vec<_>>(),
    );
    report.note("compatible", runs.first().map(|r| r.bundle.compat));
    Ok((report, runs))
}

/// Relative sup-t `L²` gap between the Volterra route and the per-mode ODE
/// oracle for `w`, `w_t`, `w_tt` at every level.
pub fn run_compare_oracle(cfg: &ScenarioConfig) -> Result<Report> {
    let id = experiment_id(cfg, ExperimentKind::CompareOracle);
    let tol = cfg.tolerances.cross_route;
    let levels = cfg.levels();
    let results = par::try_map_indexed(Execution::Auto, levels.len(), |i| {
        let (n, dt) = levels[i];
        let (sc, bundle) = solve_level(cfg, n, dt)?;
        let oracle = oracle_solve(&sc.data, &sc.params, Execution::Auto)?;
        let series = [
            relative_error_series(&bundle.w, &oracle.w)?,
            relative_error_series(&bundle.w_t, &oracle.w_t)?,
            relative_error_series(&bundle.w_tt, &oracle.w_tt)?,
        ];
        Ok::<_, Error>((n, dt, *bundle.w.grid(), series, oracle.analytic_sources))
    })?;
    let mut report = Report::new(&id);
    let mut worst: f64 = 0.0;
    for (n, dt, grid, series, analytic) in &results {
        let level = level_label(*n, *dt);
        for (name, s) in ["w", "w_t", "w_tt"].iter().zip(series) {
            let err = s.iter().copied().fold(0.0, f64::max);
            worst = worst.max(err);
            report.row(&level, format!("rel_sup_l2_{name}"), err, Some(0.0), Some(tol), Status::from_check(err <= tol));
        }
        if !analytic {
            report.info(&level, "oracle_interpolated_sources", 1.0);
        }
        let mut table = Table::new(format!("{id}_N{n}_dt{dt:e}"), &["t", "err_w", "err_wt", "err_wtt"]);
        for m in (0..grid.len()).step_by(cfg.output.stride) {
            table.rows.push(vec![grid.time(m), series[0][m], series[1][m], series[2][m]]);
        }
        report.tables.push(table);
    }
    report.note("config", cfg);
    report.note("max_relative_error", worst);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::SpaceGen;

    #[test]
    fn zero_data_gives_zero_series() {
        let mut cfg = ScenarioConfig::preset(ExperimentKind::Solve);
        cfg.modes = vec![8];
        cfg.domain.grid_points_per_axis = 64;
        cfg.time.dt = vec![0.01];
        cfg.data.w0 = SpaceGen::Zero;
        let (report, runs) = run_solve(&cfg).unwrap();
        assert!(runs[0].norms.w_h2.iter().all(|v| *v == 0.0));
        assert!(runs[0].norms.wtt_l2.iter().all(|v| *v == 0.0));
        assert_eq!(report.exit_code(), 0);
    }

    #[test]
    fn first_mode_sup_matches_oracle() {
        let mut cfg = ScenarioConfig::preset(ExperimentKind::Solve);
        cfg.modes = vec![16];
        cfg.time.dt = vec![1e-3];
        let (report, runs) = run_solve(&cfg).unwrap();
        assert_eq!(report.exit_code(), 0, "{:?}", report.failures().collect::<Vec<_>>());
        let pi2 = std::f64::consts::PI.powi(2);
        let h2 = (1.0 + pi2 + pi2 * pi2).sqrt();
        assert!((runs[0].norms.w_h2[0] - h2).abs() / h2 < 1e-3);
    }
}
