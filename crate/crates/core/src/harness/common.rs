use super::config::{ExperimentKind, ScenarioConfig};
use super::scenario::{build_scenario, Scenario};
use crate::families::{TimeGrid, Trajectory};
use crate::oracle::OracleSolution;
use crate::par::Execution;
use crate::reduction::{solve_mgt, Component, SolutionBundle, SolveOptions};
use crate::Result;

pub(crate) fn experiment_id(cfg: &ScenarioConfig, kind: ExperimentKind) -> String {
    if cfg.name == kind.name() {
        cfg.name.clone()
    } else {
        format!("{}_{}", kind.name(), cfg.name)
    }
}

pub(crate) fn level_label(n: usize, dt: f64) -> String {
    format!("N={n},dt={dt:e}")
}

pub(crate) fn solve_level(cfg: &ScenarioConfig, n: usize, dt: f64) -> Result<(Scenario, SolutionBundle)> {
    let sc = build_scenario(cfg, n, dt)?;
    let opts = SolveOptions { method: cfg.method, exec: Execution::Auto };
    let bundle = solve_mgt(&sc.data, &sc.params, opts)?;
    Ok((sc, bundle))
}

/// Interior norm series `‖w‖_{H²}`, `‖w_t‖_{H¹}`, `‖w_tt‖_{L²}`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormSeries {
    pub t: Vec<f64>,
    pub w_h2: Vec<f64>,
    pub wt_h1: Vec<f64>,
    pub wtt_l2: Vec<f64>,
}

fn sup(v: &[f64]) -> f64 {
    v.iter().copied().fold(0.0, f64::max)
}

impl NormSeries {
    pub fn of(bundle: &SolutionBundle, stride: usize) -> Result<Self> {
        let exec = Execution::Auto;
        let w = bundle.sobolev_series(Component::W, 2, stride, exec)?;
        let wt = bundle.sobolev_series(Component::Wt, 1, stride, exec)?;
        let wtt = bundle.sobolev_series(Component::Wtt, 0, stride, exec)?;
        Ok(Self {
            t: w.iter().map(|p| p.0).collect(),
            w_h2: w.iter().map(|p| p.1).collect(),
            wt_h1: wt.iter().map(|p| p.1).collect(),
            wtt_l2: wtt.iter().map(|p| p.1).collect(),
        })
    }

    pub fn sups(&self) -> [f64; 3] {
        [sup(&self.w_h2), sup(&self.wt_h1), sup(&self.wtt_l2)]
    }

    /// Largest change of `‖w‖_{H²}` between adjacent samples.
    pub fn max_jump(&self) -> f64 {
        self.w_h2.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max)
    }
}

/// `∂_ν w` and `∂_ν w_t` per node with their `Σ`-norms.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceNorms {
    pub dn_w: Vec<Vec<f64>>,
    pub dn_wt: Vec<Vec<f64>>,
    /// `‖∂_ν w‖_{H¹(Σ)}` with the time derivative taken from `∂_ν w_t`.
    pub dn_w_h1: f64,
    pub dn_wt_l2: f64,
}

fn time_integral(grid: &TimeGrid, f: impl Fn(usize) -> f64) -> f64 {
    grid.trapezoid_weights(grid.steps).iter().enumerate().map(|(m, w)| w * f(m)).sum()
}

impl TraceNorms {
    pub fn of(bundle: &SolutionBundle) -> Result<Self> {
        let dn_w = bundle.normal_traces(Component::W)?;
        let dn_wt = bundle.normal_traces(Component::Wt)?;
        let grid = bundle.w.grid();
        let sq = |s: &[Vec<f64>], m: usize| s.iter().map(|n| n[m] * n[m]).sum::<f64>();
        let l2_w = time_integral(grid, |m| sq(&dn_w, m));
        let l2_wt = time_integral(grid, |m| sq(&dn_wt, m));
        Ok(Self { dn_w_h1: (l2_w + l2_wt).sqrt(), dn_wt_l2: l2_wt.sqrt(), dn_w, dn_wt })
    }
}

/// Bundle carrying oracle trajectories so bundle norms apply to them.
pub(crate) fn oracle_bundle(route: &SolutionBundle, o: &OracleSolution) -> SolutionBundle {
    SolutionBundle {
        w: o.w.clone(),
        w_t: o.w_t.clone(),
        w_tt: o.w_tt.clone(),
        v: o.w.clone(),
        v_t: o.w_t.clone(),
        v_tt: o.w_tt.clone(),
        picard_terms: None,
        ..route.clone()
    }
}

/// Time series of `‖a(t) - b(t)‖_{L²} / sup_t ‖b‖_{L²}`.
pub(crate) fn relative_error_series(a: &Trajectory, b: &Trajectory) -> Result<Vec<f64>> {
    let scale = b.sup_l2().max(1e-300);
    Ok(a.sub(b)?.l2_series().into_iter().map(|e| e / scale).collect())
}

/// `sup_t ‖fine - coarse‖_{L²}` on the coarse samples, padding modes with zeros.
pub(crate) fn successive_difference(coarse: &Trajectory, fine: &Trajectory) -> Option<f64> {
    let (gc, gf) = (coarse.grid(), fine.grid());
    if gf.steps % gc.steps != 0 || (gc.t_final - gf.t_final).abs() > 1e-12 {
        return None;
    }
    let r = gf.steps / gc.steps;
    let n = coarse.modes().len().max(fine.modes().len());
    let empty: Vec<f64> = Vec::new();
    let at = |tr: &Trajectory, k: usize, m: usize| tr.modes().get(k).unwrap_or(&empty).get(m).copied().unwrap_or(0.0);
    let mut worst: f64 = 0.0;
    for m in 0..gc.len() {
        let e: f64 = (0..n).map(|k| (at(fine, k, m * r) - at(coarse, k, m)).powi(2)).sum();
        worst = worst.max(e.sqrt());
    }
    Some(worst)
}
