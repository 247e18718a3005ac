use super::common::{experiment_id, level_label, solve_level, NormSeries, TraceNorms};
use super::config::{ExperimentKind, ScenarioConfig};
use super::report::{drift, observed_order, Report, Status, Table};
use super::scenario::boundary_regularity;
use crate::families::{boundary_convolution_probe, CosineFamily};
use crate::par::{self, Execution};
use crate::spectral::Regularity;
use crate::{Error, Result};

/// Everything the witness compares between refinement levels.
#[derive(Debug, Clone)]
pub struct LevelStats {
    pub modes: usize,
    pub dt: f64,
    pub norms: NormSeries,
    pub traces: std::result::Result<TraceNorms, String>,
    /// `t ↦ ‖𝒜 ∫₀ᵗ R_-(t-s) Dg(s) ds‖_{L²}`.
    pub probe: Vec<f64>,
    pub compatible: bool,
}

impl LevelStats {
    fn probe_sup(&self) -> f64 {
        self.probe.iter().copied().fold(0.0, f64::max)
    }
}

fn level_stats(cfg: &ScenarioConfig, n: usize, dt: f64) -> Result<LevelStats> {
    let (sc, bundle) = solve_level(cfg, n, dt)?;
    let norms = NormSeries::of(&bundle, cfg.output.stride)?;
    let traces = TraceNorms::of(&bundle).map_err(|e| e.to_string());
    let fam = CosineFamily::new(sc.basis().clone(), 1.0)?;
    let probe = boundary_convolution_probe(&fam, &sc.data.g)?.minus;
    Ok(LevelStats { modes: n, dt, norms, traces, probe, compatible: sc.data.compat.all() })
}

/// Refinement witnesses for the interior regularity, the trace regularity
/// of `∂_ν w` and `∂_ν w_t`, the boundary-to-interior convolution and the
/// divergence under a compatibility violation.
///
/// The mode ladder runs at the finest step and the step ladder at the
/// largest mode count.
pub fn run_regularity_witness(cfg: &ScenarioConfig) -> Result<(Report, Vec<LevelStats>)> {
    if cfg.modes.len() < 2 || cfg.time.dt.len() < 2 {
        return Err(Error::Config(
            "witness needs at least two mode counts and two step sizes".into(),
        ));
    }
    let id = experiment_id(cfg, ExperimentKind::Witness);
    let tol = &cfg.tolerances;
    let mut modes = cfg.modes.clone();
    modes.sort_unstable();
    let mut dts = cfg.time.dt.clone();
    dts.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let (n_max, dt_min) = (*modes.last().unwrap(), *dts.last().unwrap());
    let mut levels: Vec<(usize, f64)> = modes.iter().map(|&n| (n, dt_min)).collect();
    levels.extend(dts.iter().filter(|&&d| d != dt_min).map(|&d| (n_max, d)));
    let stats = par::try_map_indexed(Execution::Auto, levels.len(), |i| {
        level_stats(cfg, levels[i].0, levels[i].1)
    })?;
    let find = |n: usize, dt: f64| stats.iter().find(|s| s.modes == n && s.dt == dt).unwrap();
    let n_ladder: Vec<&LevelStats> = modes.iter().map(|&n| find(n, dt_min)).collect();
    let dt_ladder: Vec<&LevelStats> = dts.iter().map(|&d| find(n_max, d)).collect();

    let compatible = stats[0].compatible;
    let g_reg = boundary_regularity(&cfg.data);
    // a jump in g moves the lifted field by a jump in H²
    let a_applies = compatible && g_reg >= Regularity::Lipschitz;
    let mut report = Report::new(&id);
    let pair_label =
        |a: &LevelStats, b: &LevelStats| format!("{} -> {}", level_label(a.modes, a.dt), level_label(b.modes, b.dt));
    let drift_row = |report: &mut Report, label: String, name: &str, a: f64, b: f64, tol: f64, applies: bool| {
        let d = drift(a, b);
        let status = if !applies {
            Status::Flagged
        } else if d.is_finite() {
            Status::from_check(d <= tol)
        } else {
            Status::Fail
        };
        report.row(label, name, d, Some(a), Some(tol), status);
    };

    // (a) interior norms
    for ladder in [&n_ladder, &dt_ladder] {
        for p in ladder.windows(2) {
            let (sa, sb) = (p[0].norms.sups(), p[1].norms.sups());
            for (k, name) in ["a_sup_w_h2", "a_sup_wt_h1", "a_sup_wtt_l2"].iter().enumerate() {
                drift_row(&mut report, pair_label(p[0], p[1]), name, sa[k], sb[k], tol.interior_drift, a_applies);
            }
        }
    }
    // continuity proxy: adjacent-sample jumps shrink with dt
    for p in dt_ladder.windows(2) {
        let (ja, jb) = (p[0].norms.max_jump(), p[1].norms.max_jump());
        let order = observed_order(ja, jb, p[0].dt * cfg.output.stride as f64, p[1].dt * cfg.output.stride as f64);
        let status = if !a_applies {
            Status::Flagged
        } else {
            Status::from_check(order >= tol.jump_order_min || jb == 0.0)
        };
        report.row(pair_label(p[0], p[1]), "a_jump_order_w_h2", order, Some(ja), Some(tol.jump_order_min), status);
    }
    // (b), (c) normal traces
    let b_applies = compatible && g_reg == Regularity::Smooth;
    let c_applies = compatible && g_reg >= Regularity::Lipschitz;
    for ladder in [&n_ladder, &dt_ladder] {
        for p in ladder.windows(2) {
            let label = pair_label(p[0], p[1]);
            match (&p[0].traces, &p[1].traces) {
                (Ok(ta), Ok(tb)) => {
                    drift_row(&mut report, label.clone(), "b_dn_w_h1_sigma", ta.dn_w_h1, tb.dn_w_h1, tol.trace_drift, b_applies);
                    drift_row(&mut report, label, "c_dn_wt_l2_sigma", ta.dn_wt_l2, tb.dn_wt_l2, tol.trace_drift, c_applies);
                }
                (a, b) => {
                    let msg = a.as_ref().err().or(b.as_ref().err()).cloned().unwrap_or_default();
                    report.note(&format!("trace_error {label}"), msg);
                    for (name, applies) in [("b_dn_w_h1_sigma", b_applies), ("c_dn_wt_l2_sigma", c_applies)] {
                        let status = if applies { Status::Fail } else { Status::Flagged };
                        report.row(label.clone(), name, f64::NAN, None, Some(tol.trace_drift), status);
                    }
                }
            }
        }
    }
    // (d) divergence without compatibility
    if !compatible {
        for p in n_ladder.windows(2) {
            let growth = p[1].norms.sups()[0] / p[0].norms.sups()[0];
            let status = if growth >= tol.divergence_factor { Status::ExpectedFail } else { Status::Fail };
            report.row(pair_label(p[0], p[1]), "d_divergence_growth_w_h2", growth, None, Some(tol.divergence_factor), status);
        }
    }
    // boundary-to-interior convolution
    for ladder in [&n_ladder, &dt_ladder] {
        for p in ladder.windows(2) {
            drift_row(&mut report, pair_label(p[0], p[1]), "e_boundary_probe_sup_l2", p[0].probe_sup(), p[1].probe_sup(), tol.probe_drift, true);
        }
    }

    for s in &stats {
        let mut t = Table::new(
            format!("{id}_N{}_dt{:e}", s.modes, s.dt),
            &["t", "w_h2", "wt_h1", "wtt_l2", "boundary_probe_l2"],
        );
        let last = s.probe.len() - 1;
        for (i, time) in s.norms.t.iter().enumerate() {
            let m = ((time / cfg.time.t_final * last as f64).round() as usize).min(last);
            t.rows.push(vec![*time, s.norms.w_h2[i], s.norms.wt_h1[i], s.norms.wtt_l2[i], s.probe[m]]);
        }
        report.tables.push(t);
    }
    report.note("config", cfg);
    report.note("compatible", compatible);
    report.note("boundary_regularity", g_reg);
    Ok((report, stats))
}
