use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::spectral::{EigenBasis, SpectralField};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureRule {
    /// Exact kernel, piecewise-linear integrand (trapezoidal weights on the data).
    #[default]
    ProductTrapezoid,
}

/// Uniform grid `t_m = m·T/M`, `m = 0..=M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t_final: f64,
    pub steps: usize,
    #[serde(default)]
    pub rule: QuadratureRule,
}

impl TimeGrid {
    pub fn new(t_final: f64, steps: usize) -> Result<Self> {
        if !(t_final.is_finite() && t_final > 0.0) {
            return Err(Error::invalid(format!("final time must be positive, got {t_final}")));
        }
        if steps == 0 {
            return Err(Error::invalid("time grid needs at least one step"));
        }
        Ok(Self { t_final, steps, rule: QuadratureRule::ProductTrapezoid })
    }

    /// Grid with spacing as close to `dt` as possible without exceeding it.
    pub fn with_dt(t_final: f64, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::invalid(format!("dt must be positive, got {dt}")));
        }
        Self::new(t_final, (t_final / dt - 1e-9).ceil().max(1.0) as usize)
    }

    pub fn dt(&self) -> f64 {
        self.t_final / self.steps as f64
    }

    /// Number of samples, `M + 1`.
    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn time(&self, m: usize) -> f64 {
        m as f64 * self.dt()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        let dt = self.dt();
        (0..=self.steps).map(move |m| m as f64 * dt)
    }

    /// Trapezoidal weights for `∫₀^{t_m}`.
    pub fn trapezoid_weights(&self, m: usize) -> Vec<f64> {
        let h = self.dt();
        let mut w = vec![h; m + 1];
        w[0] = 0.5 * h;
        w[m] = if m == 0 { 0.0 } else { 0.5 * h };
        w
    }
}

/// Time samples of a spectral field, stored mode-major: `modes[k][m]`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    basis: Arc<EigenBasis>,
    grid: TimeGrid,
    modes: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn new(basis: Arc<EigenBasis>, grid: TimeGrid, modes: Vec<Vec<f64>>) -> Result<Self> {
        if modes.len() != basis.len() {
            return Err(Error::BasisMismatch(format!(
                "{} mode series for a basis of {} modes",
                modes.len(),
                basis.len()
            )));
        }
        if let Some(bad) = modes.iter().find(|s| s.len() != grid.len()) {
            return Err(Error::GridMismatch { expected: grid.len(), actual: bad.len() });
        }
        Ok(Self { basis, grid, modes })
    }

    pub fn zeros(basis: Arc<EigenBasis>, grid: TimeGrid) -> Self {
        let modes = vec![vec![0.0; grid.len()]; basis.len()];
        Self { basis, grid, modes }
    }

    /// Separable trajectory `Σ_j p_j(t) F_j`.
    pub fn from_fn(basis: Arc<EigenBasis>, grid: TimeGrid, f: impl Fn(usize, f64) -> f64) -> Self {
        let modes = (0..basis.len()).map(|k| grid.times().map(|t| f(k, t)).collect()).collect();
        Self { basis, grid, modes }
    }

    pub fn basis(&self) -> &Arc<EigenBasis> {
        &self.basis
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn mode(&self, k: usize) -> &[f64] {
        &self.modes[k]
    }

    pub fn modes(&self) -> &[Vec<f64>] {
        &self.modes
    }

    pub fn into_modes(self) -> Vec<Vec<f64>> {
        self.modes
    }

    pub fn samples(&self) -> usize {
        self.grid.len()
    }

    pub fn snapshot(&self, m: usize) -> SpectralField {
        let coeffs = self.modes.iter().map(|s| s[m]).collect();
        SpectralField::new(self.basis.clone(), coeffs).expect("trajectory matches its basis")
    }

    /// `(Σ_k c_k(t_m)²)^{1/2}` at every sample.
    pub fn l2_series(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.samples()];
        for s in &self.modes {
            for (o, v) in out.iter_mut().zip(s) {
                *o += v * v;
            }
        }
        out.iter_mut().for_each(|v| *v = v.sqrt());
        out
    }

    pub fn sup_l2(&self) -> f64 {
        self.l2_series().into_iter().fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.modes.iter().all(|s| s.iter().all(|v| *v == 0.0))
    }

    /// `self - other`.
    pub fn sub(&self, other: &Trajectory) -> Result<Trajectory> {
        self.check_compatible(other)?;
        let modes = self
            .modes
            .iter()
            .zip(&other.modes)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
            .collect();
        Ok(Self { basis: self.basis.clone(), grid: self.grid, modes })
    }

    /// Relative sup-in-time `L²`-in-space distance `sup‖a-b‖ / max(sup‖b‖, floor)`.
    pub fn relative_sup_l2_error(&self, reference: &Trajectory, floor: f64) -> Result<f64> {
        let diff = self.sub(reference)?.sup_l2();
        Ok(diff / reference.sup_l2().max(floor))
    }

    pub fn check_compatible(&self, other: &Trajectory) -> Result<()> {
        if !self.basis.same_as(&other.basis) {
            return Err(Error::BasisMismatch("trajectories live in different bases".into()));
        }
        if self.grid != other.grid {
            return Err(Error::GridMismatch { expected: self.grid.len(), actual: other.grid.len() });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{build_basis, DomainSpec};

    #[test]
    fn grid_basics() {
        let g = TimeGrid::new(1.0, 4).unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(g.dt(), 0.25);
        assert_eq!(g.times().collect::<Vec<_>>(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(g.trapezoid_weights(2), vec![0.125, 0.25, 0.125]);
        assert_eq!(TimeGrid::with_dt(1.0, 1e-4).unwrap().steps, 10000);
        assert!(TimeGrid::new(0.0, 3).is_err());
        assert!(TimeGrid::new(1.0, 0).is_err());
    }

    #[test]
    fn trajectory_shape_checks() {
        let b = build_basis(DomainSpec::interval(16).unwrap(), 3).unwrap();
        let g = TimeGrid::new(1.0, 4).unwrap();
        assert!(Trajectory::new(b.clone(), g, vec![vec![0.0; 5]; 2]).is_err());
        assert!(Trajectory::new(b.clone(), g, vec![vec![0.0; 4]; 3]).is_err());
        let t = Trajectory::from_fn(b, g, |k, t| k as f64 + t);
        assert_eq!(t.snapshot(4).coeffs(), &[1.0, 2.0, 3.0]);
        assert!((t.l2_series()[0] - 5.0f64.sqrt()).abs() < 1e-15);
    }
}
