use std::f64::consts::{PI, SQRT_2};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainKind {
    UnitInterval,
    UnitSquare,
}

/// A model domain plus the resolution of its physical evaluation grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DomainSpec {
    pub kind: DomainKind,
    /// Number of grid cells per axis; the grid has `n + 1` nodes per axis.
    pub grid_points_per_axis: usize,
}

impl DomainSpec {
    pub const MIN_GRID_POINTS: usize = 8;

    pub fn new(kind: DomainKind, grid_points_per_axis: usize) -> Result<Self> {
        if grid_points_per_axis < Self::MIN_GRID_POINTS {
            return Err(Error::invalid(format!(
                "grid_points_per_axis must be >= {}, got {grid_points_per_axis}",
                Self::MIN_GRID_POINTS
            )));
        }
        Ok(Self { kind, grid_points_per_axis })
    }

    pub fn interval(grid_points: usize) -> Result<Self> {
        Self::new(DomainKind::UnitInterval, grid_points)
    }

    pub fn square(grid_points: usize) -> Result<Self> {
        Self::new(DomainKind::UnitSquare, grid_points)
    }

    pub fn dimension(&self) -> usize {
        match self.kind {
            DomainKind::UnitInterval => 1,
            DomainKind::UnitSquare => 2,
        }
    }

    /// Endpoints {0, 1} of the interval, or the edges (bottom, right, top, left).
    pub fn boundary_node_count(&self) -> usize {
        match self.kind {
            DomainKind::UnitInterval => 2,
            DomainKind::UnitSquare => 4,
        }
    }

    pub fn grid_spacing(&self) -> f64 {
        1.0 / self.grid_points_per_axis as f64
    }
}

/// Multi-index of a sine mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    Line(u32),
    Plane(u32, u32),
}

impl Mode {
    fn max_index(self) -> u32 {
        match self {
            Mode::Line(k) => k,
            Mode::Plane(j, k) => j.max(k),
        }
    }
}

/// Closed-form Dirichlet spectrum of `-Δ` on the unit interval or square.
///
/// On the interval `e_k(x) = √2 sin(kπx)`, `μ_k = (kπ)²`. On the square,
/// `mode_count` is per axis and `e_{jk}(x,y) = 2 sin(jπx) sin(kπy)`,
/// `μ_{jk} = (j² + k²)π²`, ordered lexicographically in `(j, k)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenBasis {
    domain: DomainSpec,
    mode_count: usize,
    modes: Vec<Mode>,
    eigenvalues: Vec<f64>,
    /// `sin(kπ x_i)` on the grid nodes of one axis, `k = 1..=mode_count`.
    #[serde(skip)]
    axis_sines: Vec<Vec<f64>>,
}

pub fn build_basis(domain: DomainSpec, mode_count: usize) -> Result<Arc<EigenBasis>> {
    EigenBasis::new(domain, mode_count).map(Arc::new)
}

impl EigenBasis {
    pub fn new(domain: DomainSpec, mode_count: usize) -> Result<Self> {
        if mode_count == 0 {
            return Err(Error::invalid("mode_count must be >= 1"));
        }
        let n = mode_count as u32;
        let modes: Vec<Mode> = match domain.kind {
            DomainKind::UnitInterval => (1..=n).map(Mode::Line).collect(),
            DomainKind::UnitSquare => (1..=n)
                .flat_map(|j| (1..=n).map(move |k| Mode::Plane(j, k)))
                .collect(),
        };
        let eigenvalues = modes
            .iter()
            .map(|m| match *m {
                Mode::Line(k) => (k as f64 * PI).powi(2),
                Mode::Plane(j, k) => ((j * j + k * k) as f64) * PI * PI,
            })
            .collect();
        let g = domain.grid_points_per_axis;
        let h = domain.grid_spacing();
        let axis_sines = (1..=mode_count)
            .map(|k| (0..=g).map(|i| (k as f64 * PI * i as f64 * h).sin()).collect())
            .collect();
        Ok(Self { domain, mode_count, modes, eigenvalues, axis_sines })
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    /// Modes per axis.
    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    /// Total number of modes (`N` on the interval, `N²` on the square).
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvalue(&self, i: usize) -> f64 {
        self.eigenvalues[i]
    }

    /// Index of the mode within the basis, if present.
    pub fn index_of(&self, mode: Mode) -> Option<usize> {
        self.modes.iter().position(|&m| m == mode)
    }

    /// Whether mode `i` belongs to the half-resolution basis (indices ≤ ⌈N/2⌉).
    pub fn in_half_basis(&self, i: usize) -> bool {
        self.modes[i].max_index() as usize <= self.mode_count.div_ceil(2)
    }

    /// Evaluates `e_i` at a point (`[x]` or `[x, y]`).
    pub fn eval(&self, i: usize, point: &[f64]) -> f64 {
        match self.modes[i] {
            Mode::Line(k) => SQRT_2 * (k as f64 * PI * point[0]).sin(),
            Mode::Plane(j, k) => {
                2.0 * (j as f64 * PI * point[0]).sin() * (k as f64 * PI * point[1]).sin()
            }
        }
    }

    /// Outward normal derivative `∂_ν e_i` at boundary node `node`; on the
    /// square, `s ∈ [0,1]` is the arclength parameter along the edge.
    pub fn normal_derivative(&self, i: usize, node: usize, s: f64) -> f64 {
        match self.modes[i] {
            Mode::Line(k) => {
                let kpi = k as f64 * PI;
                match node {
                    0 => -SQRT_2 * kpi,
                    _ => SQRT_2 * kpi * sign_pow(k),
                }
            }
            Mode::Plane(j, k) => {
                let (jp, kp) = (j as f64 * PI, k as f64 * PI);
                match node {
                    0 => -2.0 * kp * (jp * s).sin(),
                    1 => 2.0 * jp * sign_pow(j) * (kp * s).sin(),
                    2 => 2.0 * kp * sign_pow(k) * (jp * s).sin(),
                    _ => -2.0 * jp * (kp * s).sin(),
                }
            }
        }
    }

    /// Boundary flux `∮_{node} ∂_ν e_i dσ` of mode `i` over one boundary node.
    pub fn boundary_flux(&self, i: usize, node: usize) -> f64 {
        match self.modes[i] {
            Mode::Line(_) => self.normal_derivative(i, node, 0.0),
            Mode::Plane(j, k) => {
                let (jp, kp) = (j as f64 * PI, k as f64 * PI);
                // ∫₀¹ sin(nπs) ds = (1 - (-1)^n)/(nπ)
                let int_j = (1.0 - sign_pow(j)) / jp;
                let int_k = (1.0 - sign_pow(k)) / kp;
                match node {
                    0 => -2.0 * kp * int_j,
                    1 => 2.0 * jp * sign_pow(j) * int_k,
                    2 => 2.0 * kp * sign_pow(k) * int_j,
                    _ => -2.0 * jp * int_k,
                }
            }
        }
    }

    /// `⟨Dφ, e_i⟩ = Σ_nodes φ_node · lifting_weight(i, node)` for node-constant data.
    pub fn lifting_weight(&self, i: usize, node: usize) -> f64 {
        -self.boundary_flux(i, node) / self.eigenvalues[i]
    }

    /// Lifting weights of every mode, laid out `[mode][node]`.
    pub fn lifting_weights(&self) -> Vec<Vec<f64>> {
        let nodes = self.domain.boundary_node_count();
        (0..self.len())
            .map(|i| (0..nodes).map(|n| self.lifting_weight(i, n)).collect())
            .collect()
    }

    /// `sin(kπ x_i)` for `k = 1..=mode_count` on the nodes of one grid axis.
    pub(crate) fn axis_sines(&self) -> &[Vec<f64>] {
        &self.axis_sines
    }

    pub(crate) fn same_as(&self, other: &EigenBasis) -> bool {
        self.domain == other.domain && self.mode_count == other.mode_count
    }
}

/// `(-1)^n`.
fn sign_pow(n: u32) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn line(n: usize) -> EigenBasis {
        EigenBasis::new(DomainSpec::interval(64).unwrap(), n).unwrap()
    }

    #[test]
    fn interval_spectrum() {
        let b = line(3);
        assert_relative_eq!(b.eigenvalue(0), PI * PI, epsilon = 1e-14);
        assert_relative_eq!(b.eigenvalue(0), 9.8696, epsilon = 1e-4);
        assert_relative_eq!(b.eigenvalue(2), 9.0 * PI * PI, epsilon = 1e-12);
    }

    #[test]
    fn square_spectrum() {
        let b = EigenBasis::new(DomainSpec::square(16).unwrap(), 3).unwrap();
        assert_eq!(b.len(), 9);
        let i = b.index_of(Mode::Plane(1, 2)).unwrap();
        assert_relative_eq!(b.eigenvalue(i), 5.0 * PI * PI, epsilon = 1e-12);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(EigenBasis::new(DomainSpec::interval(64).unwrap(), 0).is_err());
        assert!(DomainSpec::interval(7).is_err());
    }

    #[test]
    fn strictly_increasing_along_axis() {
        let b = line(40);
        assert!(b.eigenvalues().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn normal_derivatives_of_first_mode() {
        let b = line(4);
        assert_relative_eq!(b.normal_derivative(0, 0, 0.0), -SQRT_2 * PI, epsilon = 1e-14);
        assert_relative_eq!(b.normal_derivative(0, 1, 0.0), -SQRT_2 * PI, epsilon = 1e-14);
        assert_relative_eq!(b.normal_derivative(1, 1, 0.0), 2.0 * SQRT_2 * PI, epsilon = 1e-13);
    }

    #[test]
    fn square_flux_matches_edge_quadrature() {
        let b = EigenBasis::new(DomainSpec::square(16).unwrap(), 3).unwrap();
        let n = 4000;
        for i in 0..b.len() {
            for node in 0..4 {
                let q: f64 = (0..n)
                    .map(|m| b.normal_derivative(i, node, (m as f64 + 0.5) / n as f64))
                    .sum::<f64>()
                    / n as f64;
                assert_relative_eq!(q, b.boundary_flux(i, node), epsilon = 1e-5);
            }
        }
    }
}
