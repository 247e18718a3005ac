use serde::{Deserialize, Serialize};

use super::data::Compatibility;
use super::params::MgtParams;
use crate::families::{trajectory_normal_traces, Trajectory};
use crate::par::{self, Execution};
use crate::spectral::{
    grid_sobolev_norm, BoundarySignal, BoundaryValues, LiftedField, SpectralField,
};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    W,
    Wt,
    Wtt,
}

/// Trajectories of `(w, w_t, w_tt)` and of the transformed `(v, v_t, v_tt)`,
/// all as full eigen-coefficients (lifting included).
#[derive(Debug, Clone)]
pub struct SolutionBundle {
    pub params: MgtParams,
    pub w: Trajectory,
    pub w_t: Trajectory,
    pub w_tt: Trajectory,
    pub v: Trajectory,
    pub v_t: Trajectory,
    pub v_tt: Trajectory,
    pub g: BoundarySignal,
    pub compat: Compatibility,
    /// Largest number of Picard terms per mode, when the series was used.
    pub picard_terms: Option<Vec<usize>>,
}

impl SolutionBundle {
    pub fn component(&self, c: Component) -> &Trajectory {
        match c {
            Component::W => &self.w,
            Component::Wt => &self.w_t,
            Component::Wtt => &self.w_tt,
        }
    }

    fn boundary_series(&self, c: Component) -> Vec<&[f64]> {
        self.g
            .nodes
            .iter()
            .map(|n| match c {
                Component::W => n.g.as_slice(),
                Component::Wt => n.g_t.as_slice(),
                Component::Wtt => n.g_tt.as_slice(),
            })
            .collect()
    }

    /// Trace of the component at sample `m`.
    pub fn trace_at(&self, c: Component, m: usize) -> BoundaryValues {
        BoundaryValues(self.boundary_series(c).iter().map(|s| s[m]).collect())
    }

    pub fn lifted_snapshot(&self, c: Component, m: usize) -> LiftedField {
        let field: SpectralField = self.component(c).snapshot(m);
        LiftedField::new(field, self.trace_at(c, m)).expect("bundle traces match the domain")
    }

    /// Coefficients of `u - Dg`, with `g` the matching boundary series.
    pub fn remainder(&self, c: Component) -> Trajectory {
        let tr = self.component(c);
        let basis = tr.basis().clone();
        let bs = self.boundary_series(c);
        let modes = tr
            .modes()
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let weights: Vec<f64> =
                    (0..bs.len()).map(|n| basis.lifting_weight(k, n)).collect();
                s.iter()
                    .enumerate()
                    .map(|(m, v)| v - weights.iter().zip(&bs).map(|(w, g)| w * g[m]).sum::<f64>())
                    .collect()
            })
            .collect();
        Trajectory::new(basis, *tr.grid(), modes).expect("shape preserved")
    }

    /// `∂_ν` of the component per boundary node as a time series.
    pub fn normal_traces(&self, c: Component) -> Result<Vec<Vec<f64>>> {
        trajectory_normal_traces(&self.remainder(c), &self.boundary_series(c))
    }

    /// Grid `H^s` norm of the component at every `stride`-th sample (and the last).
    pub fn sobolev_series(&self, c: Component, s: u32, stride: usize, exec: Execution) -> Result<Vec<(f64, f64)>> {
        let grid = *self.w.grid();
        let mut idx: Vec<usize> = (0..grid.len()).step_by(stride.max(1)).collect();
        if *idx.last().unwrap() != grid.steps {
            idx.push(grid.steps);
        }
        let norms = par::try_map_indexed(exec, idx.len(), |i| {
            grid_sobolev_norm(&self.lifted_snapshot(c, idx[i]).to_grid(), s)
        })?;
        Ok(idx.into_iter().map(|m| grid.time(m)).zip(norms).collect())
    }

    pub fn sup_sobolev(&self, c: Component, s: u32, stride: usize, exec: Execution) -> Result<f64> {
        Ok(self.sobolev_series(c, s, stride, exec)?.into_iter().map(|(_, v)| v).fold(0.0, f64::max))
    }
}
