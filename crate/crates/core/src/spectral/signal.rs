use serde::{Deserialize, Serialize};

use super::field::BoundaryValues;
use crate::families::TimeGrid;
use crate::{Error, Result};

/// Closed-form scalar functions of time used for boundary data and forcing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TimeProfile {
    Zero,
    /// `Σ c_i t^i`.
    Poly { coeffs: Vec<f64> },
    /// `amp · sin(omega t + phase)`.
    Trig { amp: f64, omega: f64, phase: f64 },
    /// `amp · e^{rate t}`.
    Exp { amp: f64, rate: f64 },
    /// `slope · max(t - t0, 0)`: Lipschitz with a kink at `t0`.
    RampKink { t0: f64, slope: f64 },
    /// `height · 1[t ≥ t0]`.
    Step { t0: f64, height: f64 },
    Sum { terms: Vec<TimeProfile> },
}

/// Smoothness class of a [`TimeProfile`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regularity {
    Discontinuous,
    Lipschitz,
    Smooth,
}

impl TimeProfile {
    pub fn constant(c: f64) -> Self {
        TimeProfile::Poly { coeffs: vec![c] }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            TimeProfile::Zero => 0.0,
            TimeProfile::Poly { coeffs } => coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c),
            TimeProfile::Trig { amp, omega, phase } => amp * (omega * t + phase).sin(),
            TimeProfile::Exp { amp, rate } => amp * (rate * t).exp(),
            TimeProfile::RampKink { t0, slope } => slope * (t - t0).max(0.0),
            TimeProfile::Step { t0, height } => {
                if t >= *t0 {
                    *height
                } else {
                    0.0
                }
            }
            TimeProfile::Sum { terms } => terms.iter().map(|p| p.eval(t)).sum(),
        }
    }

    /// Pointwise (almost everywhere) derivative.
    pub fn derive(&self) -> TimeProfile {
        match self {
            TimeProfile::Zero | TimeProfile::Step { .. } => TimeProfile::Zero,
            TimeProfile::Poly { coeffs } => {
                if coeffs.len() <= 1 {
                    TimeProfile::Zero
                } else {
                    TimeProfile::Poly {
                        coeffs: coeffs.iter().enumerate().skip(1).map(|(i, c)| i as f64 * c).collect(),
                    }
                }
            }
            TimeProfile::Trig { amp, omega, phase } => TimeProfile::Trig {
                amp: amp * omega,
                omega: *omega,
                phase: phase + std::f64::consts::FRAC_PI_2,
            },
            TimeProfile::Exp { amp, rate } => TimeProfile::Exp { amp: amp * rate, rate: *rate },
            TimeProfile::RampKink { t0, slope } => TimeProfile::Step { t0: *t0, height: *slope },
            TimeProfile::Sum { terms } => TimeProfile::Sum {
                terms: terms.iter().map(|p| p.derive()).collect(),
            },
        }
    }

    pub fn regularity(&self) -> Regularity {
        match self {
            TimeProfile::Step { t0, height } if *t0 > 0.0 && *height != 0.0 => {
                Regularity::Discontinuous
            }
            TimeProfile::RampKink { t0, slope } if *t0 > 0.0 && *slope != 0.0 => {
                Regularity::Lipschitz
            }
            TimeProfile::Sum { terms } => {
                terms.iter().map(|p| p.regularity()).min().unwrap_or(Regularity::Smooth)
            }
            _ => Regularity::Smooth,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            TimeProfile::Zero => true,
            TimeProfile::Poly { coeffs } => coeffs.iter().all(|c| *c == 0.0),
            TimeProfile::Trig { amp, .. } | TimeProfile::Exp { amp, .. } => *amp == 0.0,
            TimeProfile::RampKink { slope, .. } => *slope == 0.0,
            TimeProfile::Step { height, .. } => *height == 0.0,
            TimeProfile::Sum { terms } => terms.iter().all(|p| p.is_zero()),
        }
    }

    pub fn sample(&self, grid: &TimeGrid) -> Vec<f64> {
        grid.times().map(|t| self.eval(t)).collect()
    }
}

/// How the time derivatives of a [`BoundarySignal`] were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeSource {
    Analytic,
    /// Second-order centred differences, one-sided at the ends.
    CenteredDifferences,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeSignal {
    pub g: Vec<f64>,
    pub g_t: Vec<f64>,
    pub g_tt: Vec<f64>,
}

/// Sampled Dirichlet data `g(t)` per boundary node with `g_t` and `g_tt`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundarySignal {
    pub grid: TimeGrid,
    pub nodes: Vec<NodeSignal>,
    pub derivatives: DerivativeSource,
    /// Closed forms, when the signal was built from profiles.
    #[serde(skip)]
    pub profiles: Option<Vec<TimeProfile>>,
}

impl BoundarySignal {
    pub fn zero(grid: TimeGrid, nodes: usize) -> Self {
        Self::from_profiles(grid, &vec![TimeProfile::Zero; nodes])
    }

    pub fn from_profiles(grid: TimeGrid, profiles: &[TimeProfile]) -> Self {
        let nodes = profiles
            .iter()
            .map(|p| {
                let d = p.derive();
                NodeSignal { g: p.sample(&grid), g_t: d.sample(&grid), g_tt: d.derive().sample(&grid) }
            })
            .collect();
        Self {
            grid,
            nodes,
            derivatives: DerivativeSource::Analytic,
            profiles: Some(profiles.to_vec()),
        }
    }

    /// Builds a signal from samples only, differentiating numerically.
    pub fn from_samples(grid: TimeGrid, samples: Vec<Vec<f64>>) -> Result<Self> {
        let len = grid.len();
        if len < 4 {
            return Err(Error::MissingDerivatives(
                "at least four samples are needed to difference boundary data".into(),
            ));
        }
        let h = grid.dt();
        let mut nodes = Vec::with_capacity(samples.len());
        for g in samples {
            if g.len() != len {
                return Err(Error::GridMismatch { expected: len, actual: g.len() });
            }
            let g_t = first_difference(&g, h);
            let g_tt = second_difference(&g, h);
            nodes.push(NodeSignal { g, g_t, g_tt });
        }
        Ok(Self { grid, nodes, derivatives: DerivativeSource::CenteredDifferences, profiles: None })
    }

    /// Signal with explicitly supplied derivatives; all arrays must match the grid.
    pub fn from_parts(grid: TimeGrid, nodes: Vec<NodeSignal>) -> Result<Self> {
        for n in &nodes {
            for v in [&n.g, &n.g_t, &n.g_tt] {
                if v.len() != grid.len() {
                    return Err(Error::GridMismatch { expected: grid.len(), actual: v.len() });
                }
            }
        }
        Ok(Self { grid, nodes, derivatives: DerivativeSource::Analytic, profiles: None })
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn values_at(&self, m: usize) -> BoundaryValues {
        BoundaryValues(self.nodes.iter().map(|n| n.g[m]).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.nodes
            .iter()
            .all(|n| n.g.iter().chain(&n.g_t).chain(&n.g_tt).all(|v| *v == 0.0))
    }
}

fn first_difference(g: &[f64], h: f64) -> Vec<f64> {
    let n = g.len() - 1;
    let mut d = vec![0.0; n + 1];
    for i in 1..n {
        d[i] = (g[i + 1] - g[i - 1]) / (2.0 * h);
    }
    d[0] = (-3.0 * g[0] + 4.0 * g[1] - g[2]) / (2.0 * h);
    d[n] = (3.0 * g[n] - 4.0 * g[n - 1] + g[n - 2]) / (2.0 * h);
    d
}

fn second_difference(g: &[f64], h: f64) -> Vec<f64> {
    let n = g.len() - 1;
    let h2 = h * h;
    let mut d = vec![0.0; n + 1];
    for i in 1..n {
        d[i] = (g[i + 1] - 2.0 * g[i] + g[i - 1]) / h2;
    }
    d[0] = (2.0 * g[0] - 5.0 * g[1] + 4.0 * g[2] - g[3]) / h2;
    d[n] = (2.0 * g[n] - 5.0 * g[n - 1] + 4.0 * g[n - 2] - g[n - 3]) / h2;
    d
}
