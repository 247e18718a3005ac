use super::common::{experiment_id, level_label, solve_level, successive_difference};
use super::config::{ExperimentKind, ScenarioConfig};
use super::report::{observed_order, Report, Status, Table};
use super::scenario::{data_regularity, manufactured_solution, Scenario};
use crate::families::Trajectory;
use crate::oracle::oracle_solve;
use crate::par::{self, Execution};
use crate::reduction::{Component, SolutionBundle};
use crate::spectral::Regularity;
use crate::{Error, Result};

/// `sup_t ‖w_ttt + α w_tt - c² Δw - b Δw_t - f‖_{L²}` over interior samples,
/// with `w_ttt` from centred differences of `w_tt`.
pub fn mgt_residual(sc: &Scenario, bundle: &SolutionBundle) -> Result<f64> {
    let grid = *bundle.w.grid();
    let basis = bundle.w.basis().clone();
    let p = bundle.params;
    let f = sc.data.forcing.sample(&basis, &grid)?;
    let rw = bundle.remainder(Component::W);
    let rwt = bundle.remainder(Component::Wt);
    let h = grid.dt();
    let mut worst: f64 = 0.0;
    for m in 1..grid.steps {
        let mut sq = 0.0;
        for k in 0..basis.len() {
            let mu = basis.eigenvalue(k);
            let wtt = bundle.w_tt.mode(k);
            let r = (wtt[m + 1] - wtt[m - 1]) / (2.0 * h)
                + p.alpha * wtt[m]
                + p.c * p.c * mu * rw.mode(k)[m]
                + p.b * mu * rwt.mode(k)[m]
                - f.mode(k)[m];
            sq += r * r;
        }
        worst = worst.max(sq.sqrt());
    }
    Ok(worst)
}

struct DtLevel {
    dt: f64,
    route: Trajectory,
    oracle: Trajectory,
    exact: Option<Trajectory>,
    residual: f64,
}

fn sup_error(a: &Trajectory, b: &Trajectory) -> Result<f64> {
    Ok(a.sub(b)?.sup_l2())
}

/// Observed temporal orders of the Volterra route and of the oracle, the
/// order of the MGT residual, and the decay of the spectral truncation
/// error along the mode ladder.
///
/// Errors are measured against the exact solution of manufactured data and
/// against the next finer level otherwise.
pub fn run_convergence(cfg: &ScenarioConfig) -> Result<Report> {
    if cfg.time.dt.len() < 3 {
        return Err(Error::Config("convergence needs at least three step sizes".into()));
    }
    let id = experiment_id(cfg, ExperimentKind::Convergence);
    let tol = &cfg.tolerances;
    let n = cfg.modes[0];
    let mut dts = cfg.time.dt.clone();
    dts.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let levels = par::try_map_indexed(Execution::Auto, dts.len(), |i| {
        let (sc, bundle) = solve_level(cfg, n, dts[i])?;
        let oracle = oracle_solve(&sc.data, &sc.params, Execution::Auto)?;
        let exact = sc
            .exact
            .as_ref()
            .map(|m| manufactured_solution(m, sc.basis(), *sc.data.grid())[0].clone());
        let residual = mgt_residual(&sc, &bundle)?;
        Ok::<_, Error>(DtLevel { dt: dts[i], route: bundle.w, oracle: oracle.w, exact, residual })
    })?;

    let smooth = cfg.data.manufactured.is_some() || data_regularity(&cfg.data) == Regularity::Smooth;
    let mut errors: Vec<(f64, f64, f64)> = Vec::new();
    for (i, l) in levels.iter().enumerate() {
        match &l.exact {
            Some(ex) => errors.push((l.dt, sup_error(&l.route, ex)?, sup_error(&l.oracle, ex)?)),
            None if i + 1 < levels.len() => {
                let next = &levels[i + 1];
                let diff = |a: &Trajectory, b: &Trajectory| {
                    successive_difference(a, b).ok_or_else(|| {
                        Error::Config("step sizes must halve (integer ratios) for convergence".into())
                    })
                };
                errors.push((l.dt, diff(&l.route, &next.route)?, diff(&l.oracle, &next.oracle)?));
            }
            None => {}
        }
    }

    let mut report = Report::new(&id);
    let status = |ok: bool| if smooth { Status::from_check(ok) } else { Status::Info };
    for p in errors.windows(2) {
        let label = format!("N={n},dt={:e}->{:e}", p[0].0, p[1].0);
        let vo = observed_order(p[0].1, p[1].1, p[0].0, p[1].0);
        let oo = observed_order(p[0].2, p[1].2, p[0].0, p[1].0);
        report.row(&label, "volterra_order", vo, Some(p[1].1), Some(tol.volterra_order_min), status(vo >= tol.volterra_order_min));
        report.row(&label, "oracle_order", oo, Some(p[1].2), Some(tol.oracle_order_min), status(oo >= tol.oracle_order_min));
    }
    for p in levels.windows(2) {
        let label = format!("N={n},dt={:e}->{:e}", p[0].dt, p[1].dt);
        let ro = observed_order(p[0].residual, p[1].residual, p[0].dt, p[1].dt);
        report.row(&label, "residual_order", ro, Some(p[1].residual), Some(tol.residual_order_min), status(ro >= tol.residual_order_min));
    }
    let mut table = Table::new(format!("{id}_dt"), &["dt", "volterra_error", "oracle_error", "residual"]);
    for l in &levels {
        let e = errors.iter().find(|e| e.0 == l.dt);
        table.rows.push(vec![l.dt, e.map_or(f64::NAN, |e| e.1), e.map_or(f64::NAN, |e| e.2), l.residual]);
    }
    report.tables.push(table);

    if cfg.modes.len() >= 2 {
        let mut modes = cfg.modes.clone();
        modes.sort_unstable();
        let dt = *dts.last().unwrap();
        let ws = par::try_map_indexed(Execution::Auto, modes.len(), |i| {
            solve_level(cfg, modes[i], dt).map(|(_, b)| b.w)
        })?;
        let diffs: Vec<f64> = ws.windows(2).filter_map(|p| successive_difference(&p[0], &p[1])).collect();
        let mut t = Table::new(format!("{id}_modes"), &["modes", "truncation_difference"]);
        for (i, d) in diffs.iter().enumerate() {
            report.info(level_label(modes[i], dt), "truncation_difference", *d);
            t.rows.push(vec![modes[i] as f64, *d]);
        }
        for (i, p) in diffs.windows(2).enumerate() {
            let ok = p[1] <= p[0];
            report.row(level_label(modes[i + 1], dt), "truncation_decay", p[1], Some(p[0]), None, status(ok));
        }
        report.tables.push(t);
    }
    report.note("config", cfg);
    report.note("smooth_data", smooth);
    Ok(report)
}
