use super::common::{experiment_id, solve_level};
use super::config::{ExperimentKind, ScenarioConfig};
use super::report::{Report, Status, Table};
use super::scenario::random_data_spec;
use crate::oracle::stability_threshold_scan;
use crate::par::{self, Execution};
use crate::reduction::MgtParams;
use crate::symbol::{estimate_probe, lopatinskii_sweep, EstimateKind};
use crate::{Error, Result};

const KINDS: [EstimateKind; 2] = [EstimateKind::Resolvent, EstimateKind::Semigroup];

/// Ratios of one random scenario at the coarse and fine levels, per kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbePair {
    pub scenario: usize,
    pub coarse: [f64; 2],
    pub fine: [f64; 2],
}

fn probe_scenario(cfg: &ScenarioConfig, i: usize) -> Result<ProbePair> {
    let nodes = cfg.domain.boundary_node_count();
    let local = ScenarioConfig {
        data: random_data_spec(cfg.seed.wrapping_add(i as u64), nodes),
        ..cfg.clone()
    };
    let beta = cfg.symbols.weight_beta;
    let ceiling = cfg.tolerances.estimate_ceiling;
    let mut ratios = [[0.0; 2]; 2];
    let coarse = (cfg.modes[0], cfg.time.dt[0]);
    let fine = (*cfg.modes.last().unwrap(), *cfg.time.dt.last().unwrap());
    for (slot, (n, dt)) in ratios.iter_mut().zip([coarse, fine]) {
        let (sc, bundle) = solve_level(&local, n, dt)?;
        for (j, kind) in KINDS.iter().enumerate() {
            slot[j] = estimate_probe(&bundle, &sc.data, *kind, beta, ceiling)?.ratio;
        }
    }
    Ok(ProbePair { scenario: i, coarse: ratios[0], fine: ratios[1] })
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Lopatinskii sweeps over `symbols.b_values`, the stability-threshold
/// scan around `γ = 0`, and estimate probes over random compatible data.
pub fn run_symbol_suite(cfg: &ScenarioConfig) -> Result<Report> {
    let id = experiment_id(cfg, ExperimentKind::Symbols);
    let tol = &cfg.tolerances;
    let spec = &cfg.symbols;
    let mut report = Report::new(&id);

    let mut sweep_table = Table::new(format!("{id}_sweep"), &["b", "beta", "tau", "eta", "ratio"]);
    let mut argmins = Vec::new();
    for &b in &spec.b_values {
        let r = lopatinskii_sweep(b, spec.samples, Execution::Auto)?;
        let level = format!("b={b}");
        let above_floor = r.min_ratio > 0.0 && r.min_ratio >= r.floor * (1.0 - 1e-12);
        report.row(&level, "lopatinskii_min_vs_floor", r.min_ratio, Some(r.floor), None, Status::from_check(above_floor));
        if b == 1.0 {
            report.row(&level, "lopatinskii_min", r.min_ratio, Some(r.floor), Some(tol.lopatinskii_min), Status::from_check(r.min_ratio >= tol.lopatinskii_min));
        }
        report.info(&level, "sweep_samples", r.samples as f64);
        for row in &r.rows {
            sweep_table.rows.push(vec![b, row.beta, row.tau, row.eta, row.ratio]);
        }
        argmins.push(serde_json::json!({"b": b, "min_ratio": r.min_ratio, "floor": r.floor, "argmin": r.argmin}));
    }
    report.tables.push(sweep_table);
    report.note("lopatinskii", argmins);

    let p = cfg.params;
    let kappa = p.c * p.c / p.b;
    let shifted = |g: f64| MgtParams { alpha: kappa + g, ..p };
    let offset = 0.5 * kappa;
    let scan_params: Vec<MgtParams> = vec![shifted(offset), shifted(0.0), shifted(-offset)]
        .into_iter()
        .filter(|q| q.alpha > 0.0)
        .collect();
    let scan = stability_threshold_scan(&scan_params, &spec.scan_mus)?;
    let mut scan_table = Table::new(format!("{id}_threshold"), &["alpha", "gamma", "mu", "max_re"]);
    for row in &scan {
        let level = format!("gamma={:.3e},mu={}", row.gamma, row.mu);
        let gamma = row.alpha - kappa;
        if gamma > 0.0 {
            report.row(&level, "max_re_root", row.max_re, Some(0.0), None, Status::from_check(row.max_re < 0.0));
        } else if gamma == 0.0 {
            report.row(&level, "max_re_root", row.max_re, Some(0.0), Some(tol.threshold_zero), Status::from_check(row.max_re.abs() < tol.threshold_zero));
        } else if row.mu >= 100.0 {
            report.row(&level, "max_re_root", row.max_re, Some(0.0), None, Status::from_check(row.max_re > 0.0));
        } else {
            report.info(&level, "max_re_root", row.max_re);
        }
        scan_table.rows.push(vec![row.alpha, row.gamma, row.mu, row.max_re]);
    }
    report.tables.push(scan_table);

    if spec.probe_scenarios > 0 {
        if cfg.domain.kind != crate::spectral::DomainKind::UnitInterval {
            return Err(Error::Config("estimate probes need the unit interval".into()));
        }
        let pairs = par::try_map_indexed(Execution::Auto, spec.probe_scenarios, |i| probe_scenario(cfg, i))?;
        let mut table = Table::new(
            format!("{id}_probes"),
            &["scenario", "ratio_resolvent_coarse", "ratio_resolvent_fine", "ratio_semigroup_coarse", "ratio_semigroup_fine"],
        );
        for pr in &pairs {
            table.rows.push(vec![pr.scenario as f64, pr.coarse[0], pr.fine[0], pr.coarse[1], pr.fine[1]]);
        }
        report.tables.push(table);
        let mut constants = serde_json::Map::new();
        for (j, name) in ["resolvent", "semigroup"].iter().enumerate() {
            let mut fine: Vec<f64> = pairs.iter().map(|p| p.fine[j]).collect();
            let max = fine.iter().copied().fold(0.0, f64::max);
            let med = median(&mut fine);
            let spread = max / med;
            let worst_drift = pairs
                .iter()
                .map(|p| super::report::drift(p.coarse[j], p.fine[j]))
                .fold(0.0, f64::max);
            let over = pairs.iter().filter(|p| p.fine[j] > tol.estimate_ceiling).count();
            let level = format!("{} scenarios", pairs.len());
            report.info(&level, format!("{name}_max_ratio"), max);
            report.info(&level, format!("{name}_median_ratio"), med);
            report.row(&level, format!("{name}_max_over_median"), spread, None, Some(tol.estimate_spread), Status::from_check(spread < tol.estimate_spread));
            report.row(&level, format!("{name}_max_refinement_drift"), worst_drift, None, Some(tol.estimate_drift), Status::from_check(worst_drift <= tol.estimate_drift));
            report.row(&level, format!("{name}_over_ceiling"), over as f64, None, Some(tol.estimate_ceiling), Status::from_check(over == 0));
            constants.insert(name.to_string(), serde_json::json!({"max": max, "median": med, "max_drift": worst_drift}));
        }
        report.note("estimate_constants", constants);
    }
    report.note("config", cfg);
    Ok(report)
}
