use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::reduction::{MgtParams, SolveMethod};
use crate::spectral::{DomainKind, DomainSpec, TimeProfile};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Solve,
    Witness,
    Convergence,
    Symbols,
    CompareOracle,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Solve => "solve",
            ExperimentKind::Witness => "witness",
            ExperimentKind::Convergence => "convergence",
            ExperimentKind::Symbols => "symbols",
            ExperimentKind::CompareOracle => "compare_oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSpec {
    pub t_final: f64,
    /// Refinement ladder; experiments needing one step size use the first.
    pub dt: Vec<f64>,
}

/// A finite eigen-expansion in space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceGen {
    #[default]
    Zero,
    /// Coefficients of the leading modes.
    Modes { coeffs: Vec<f64> },
    /// `count` leading modes with coefficients uniform in `[-amp, amp]`
    /// divided by `k^decay`, drawn from the scenario seed.
    Random { count: usize, amp: f64, decay: f64 },
}

/// Separable forcing `profile(t) Σ coeffs[k] e_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForcingGen {
    pub profile: TimeProfile,
    pub coeffs: Vec<f64>,
}

/// Exact solution `w = Σ a_k sin(ωt + φ) e_k` with matching data and forcing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManufacturedSpec {
    pub coeffs: Vec<f64>,
    pub omega: f64,
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DataSpec {
    pub w0: SpaceGen,
    pub w1: SpaceGen,
    pub w2: SpaceGen,
    pub f: Vec<ForcingGen>,
    /// One profile per boundary node; empty means homogeneous.
    pub g: Vec<TimeProfile>,
    /// Whether the traces of `w0` and `w1` follow `g(0)` and `g_t(0)`.
    pub compatible: bool,
    /// When set, replaces every other field.
    pub manufactured: Option<ManufacturedSpec>,
}

impl Default for DataSpec {
    fn default() -> Self {
        Self {
            w0: SpaceGen::Modes { coeffs: vec![1.0] },
            w1: SpaceGen::Zero,
            w2: SpaceGen::Zero,
            f: Vec::new(),
            g: Vec::new(),
            compatible: true,
            manufactured: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Relative sup-t `L²` gap between the Volterra route and the oracle.
    pub cross_route: f64,
    /// Relative change of interior sup-norms between refinement levels.
    pub interior_drift: f64,
    /// Relative change of boundary trace norms between refinement levels.
    pub trace_drift: f64,
    /// Relative change of the boundary-to-interior probe.
    pub probe_drift: f64,
    /// Minimal growth of the `H²` sup per doubling of the mode count when
    /// compatibility fails.
    pub divergence_factor: f64,
    /// Minimal observed order of the adjacent-sample jump of `‖w‖_{H²}`.
    pub jump_order_min: f64,
    pub volterra_order_min: f64,
    pub oracle_order_min: f64,
    pub residual_order_min: f64,
    /// Acceptance threshold for the `b = 1` Lopatinskii minimum.
    pub lopatinskii_min: f64,
    /// Per-scenario ceiling of an estimate ratio.
    pub estimate_ceiling: f64,
    /// Bound on max/median of estimate ratios over random scenarios.
    pub estimate_spread: f64,
    /// Bound on the refinement drift of estimate ratios.
    pub estimate_drift: f64,
    /// Relative gap between route and oracle sup-norms in `solve`.
    pub oracle_norm: f64,
    /// Bound on `|max Re r|` for characteristic roots at `γ = 0`.
    pub threshold_zero: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            cross_route: 1e-6,
            interior_drift: 0.01,
            trace_drift: 0.05,
            probe_drift: 0.05,
            divergence_factor: 2.0,
            jump_order_min: 0.9,
            volterra_order_min: 1.8,
            oracle_order_min: 3.8,
            residual_order_min: 1.0,
            lopatinskii_min: 0.5,
            estimate_ceiling: 1e3,
            estimate_spread: 10.0,
            estimate_drift: 0.1,
            oracle_norm: 1e-4,
            threshold_zero: 1e-9,
        }
    }
}

impl Tolerances {
    fn fields_mut(&mut self) -> [(&'static str, &mut f64); 15] {
        [
            ("cross_route", &mut self.cross_route),
            ("interior_drift", &mut self.interior_drift),
            ("trace_drift", &mut self.trace_drift),
            ("probe_drift", &mut self.probe_drift),
            ("divergence_factor", &mut self.divergence_factor),
            ("jump_order_min", &mut self.jump_order_min),
            ("volterra_order_min", &mut self.volterra_order_min),
            ("oracle_order_min", &mut self.oracle_order_min),
            ("residual_order_min", &mut self.residual_order_min),
            ("lopatinskii_min", &mut self.lopatinskii_min),
            ("estimate_ceiling", &mut self.estimate_ceiling),
            ("estimate_spread", &mut self.estimate_spread),
            ("estimate_drift", &mut self.estimate_drift),
            ("oracle_norm", &mut self.oracle_norm),
            ("threshold_zero", &mut self.threshold_zero),
        ]
    }

    /// Sets one tolerance by name.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        for (n, slot) in self.fields_mut() {
            if n == name {
                *slot = value;
                return Ok(());
            }
        }
        Err(Error::Config(format!("unknown tolerance `{name}`")))
    }

    /// Sets the tolerance an experiment treats as its headline threshold.
    pub fn set_primary(&mut self, kind: ExperimentKind, value: f64) {
        match kind {
            ExperimentKind::Solve => self.oracle_norm = value,
            ExperimentKind::CompareOracle => self.cross_route = value,
            ExperimentKind::Witness => self.interior_drift = value,
            ExperimentKind::Convergence => self.volterra_order_min = value,
            ExperimentKind::Symbols => self.lopatinskii_min = value,
        }
    }

    fn validate(&mut self) -> Result<()> {
        for (n, v) in self.fields_mut() {
            if !(v.is_finite() && *v > 0.0) {
                return Err(Error::Config(format!("tolerance `{n}` must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SymbolSpec {
    pub b_values: Vec<f64>,
    pub samples: usize,
    pub probe_scenarios: usize,
    pub weight_beta: f64,
    /// Eigenvalue levels of the stability-threshold scan.
    pub scan_mus: Vec<f64>,
}

impl Default for SymbolSpec {
    fn default() -> Self {
        Self {
            b_values: vec![0.25, 1.0, 4.0],
            samples: 10_000,
            probe_scenarios: 100,
            weight_beta: 2.0,
            scan_mus: vec![1.0, 10.0, 100.0, 1000.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    /// Time-sample stride of the norm series.
    pub stride: usize,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self { stride: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub name: String,
    pub experiment: Option<ExperimentKind>,
    pub domain: DomainSpec,
    pub modes: Vec<usize>,
    pub time: TimeSpec,
    pub params: MgtParams,
    pub data: DataSpec,
    pub seed: u64,
    pub method: SolveMethod,
    pub tolerances: Tolerances,
    pub symbols: SymbolSpec,
    pub output: OutputSpec,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            name: "scenario".into(),
            experiment: None,
            domain: DomainSpec { kind: DomainKind::UnitInterval, grid_points_per_axis: 256 },
            modes: vec![32],
            time: TimeSpec { t_final: 1.0, dt: vec![1e-3] },
            params: MgtParams { alpha: 2.0, b: 1.0, c: 1.0 },
            data: DataSpec::default(),
            seed: 0,
            method: SolveMethod::Direct,
            tolerances: Tolerances::default(),
            symbols: SymbolSpec::default(),
            output: OutputSpec::default(),
        }
    }
}

impl ScenarioConfig {
    /// Defaults that satisfy the preconditions of `kind`.
    pub fn preset(kind: ExperimentKind) -> Self {
        let base = Self { name: kind.name().into(), experiment: Some(kind), ..Self::default() };
        match kind {
            ExperimentKind::Solve | ExperimentKind::CompareOracle => base,
            ExperimentKind::Witness => Self {
                modes: vec![32, 64],
                domain: DomainSpec { kind: DomainKind::UnitInterval, grid_points_per_axis: 512 },
                time: TimeSpec { t_final: 1.0, dt: vec![2e-3, 1e-3] },
                data: DataSpec {
                    w0: SpaceGen::Modes { coeffs: vec![0.5, 0.0, 0.1] },
                    g: vec![
                        TimeProfile::Trig { amp: 1.0, omega: 2.0, phase: 0.0 },
                        TimeProfile::Poly { coeffs: vec![0.0, 0.0, 1.0] },
                    ],
                    ..DataSpec::default()
                },
                ..base
            },
            ExperimentKind::Convergence => Self {
                modes: vec![8],
                time: TimeSpec { t_final: 1.0, dt: vec![0.02, 0.01, 0.005, 0.0025] },
                data: DataSpec {
                    manufactured: Some(ManufacturedSpec {
                        coeffs: vec![1.0, 0.5, 0.25],
                        omega: 3.0,
                        phase: 0.4,
                    }),
                    ..DataSpec::default()
                },
                ..base
            },
            ExperimentKind::Symbols => Self {
                modes: vec![32, 64],
                domain: DomainSpec { kind: DomainKind::UnitInterval, grid_points_per_axis: 256 },
                time: TimeSpec { t_final: 1.0, dt: vec![2e-3, 1e-3] },
                ..base
            },
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let mut cfg: Self =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("parse error: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&mut self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.domain.grid_points_per_axis < DomainSpec::MIN_GRID_POINTS {
            return bad(format!("grid_points_per_axis must be >= {}", DomainSpec::MIN_GRID_POINTS));
        }
        if self.modes.is_empty() || self.modes.contains(&0) {
            return bad("modes must be a nonempty list of positive counts".into());
        }
        if !(self.time.t_final > 0.0 && self.time.t_final.is_finite()) {
            return bad(format!("t_final must be positive, got {}", self.time.t_final));
        }
        if self.time.dt.is_empty() {
            return bad("dt ladder is empty".into());
        }
        for &dt in &self.time.dt {
            if !(dt > 0.0 && dt <= self.time.t_final / 4.0) {
                return bad(format!("dt = {dt} must lie in (0, T/4]"));
            }
        }
        if let Err(e) = self.params.validate() {
            return bad(format!("params: {e}"));
        }
        self.tolerances.validate()?;
        let nodes = self.domain.boundary_node_count();
        if !self.data.g.is_empty() && self.data.g.len() != nodes {
            return bad(format!("g needs {nodes} node profiles, got {}", self.data.g.len()));
        }
        if self.domain.kind == DomainKind::UnitSquare && self.data.g.iter().any(|p| !p.is_zero()) {
            return bad("nonzero boundary data is only supported on the unit interval".into());
        }
        if let Some(m) = &self.data.manufactured {
            if m.coeffs.is_empty() || !(m.omega.is_finite()) {
                return bad("manufactured solution needs coefficients and a finite omega".into());
            }
        }
        let s = &self.symbols;
        if s.b_values.iter().any(|b| !(*b > 0.0)) || !(s.weight_beta > 0.0) {
            return bad("symbol b values and weight_beta must be positive".into());
        }
        if self.output.stride == 0 {
            return bad("output stride must be positive".into());
        }
        Ok(())
    }

    /// Levels `(N, dt)` in config order.
    pub fn levels(&self) -> Vec<(usize, f64)> {
        self.modes.iter().flat_map(|&n| self.time.dt.iter().map(move |&dt| (n, dt))).collect()
    }
}
