use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::families::{TimeGrid, Trajectory};
use crate::spectral::{BoundarySignal, EigenBasis, LiftedField, SpectralField, TimeProfile};
use crate::{Error, Result};

/// Tolerance of the zeroth- and first-order compatibility checks.
pub const COMPATIBILITY_TOL: f64 = 1e-8;

/// One separable forcing term `p(t) F` with `F` given by its coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForcingTerm {
    pub profile: TimeProfile,
    pub coeffs: Vec<f64>,
}

#[derive(Debug, Clone)]
pub enum Forcing {
    Zero,
    Separable(Vec<ForcingTerm>),
    Sampled(Trajectory),
}

impl Forcing {
    pub fn sample(&self, basis: &Arc<EigenBasis>, grid: &TimeGrid) -> Result<Trajectory> {
        match self {
            Forcing::Zero => Ok(Trajectory::zeros(basis.clone(), *grid)),
            Forcing::Separable(terms) => {
                for t in terms {
                    if t.coeffs.len() != basis.len() {
                        return Err(Error::BasisMismatch(format!(
                            "forcing term has {} coefficients for {} modes",
                            t.coeffs.len(),
                            basis.len()
                        )));
                    }
                }
                let samples: Vec<Vec<f64>> = terms.iter().map(|t| t.profile.sample(grid)).collect();
                Ok(Trajectory::zeros(basis.clone(), *grid).map_modes(|k, out| {
                    for (term, s) in terms.iter().zip(&samples) {
                        let c = term.coeffs[k];
                        if c != 0.0 {
                            out.iter_mut().zip(s).for_each(|(o, v)| *o += c * v);
                        }
                    }
                }))
            }
            Forcing::Sampled(tr) => {
                tr.check_compatible(&Trajectory::zeros(basis.clone(), *grid))?;
                Ok(tr.clone())
            }
        }
    }

    /// Closed-form value of mode `k` at time `t`, when available.
    pub fn mode_value(&self, k: usize, t: f64) -> Option<f64> {
        match self {
            Forcing::Zero => Some(0.0),
            Forcing::Separable(terms) => {
                Some(terms.iter().map(|term| term.coeffs[k] * term.profile.eval(t)).sum())
            }
            Forcing::Sampled(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Forcing::Zero => true,
            Forcing::Separable(terms) => {
                terms.iter().all(|t| t.profile.is_zero() || t.coeffs.iter().all(|c| *c == 0.0))
            }
            Forcing::Sampled(tr) => tr.is_zero(),
        }
    }
}

/// Compatibility of initial and boundary data at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Compatibility {
    /// `w0|_Γ = g(0)`.
    pub zeroth: bool,
    /// `w1|_Γ = g_t(0)`.
    pub first: bool,
}

impl Compatibility {
    pub fn all(&self) -> bool {
        self.zeroth && self.first
    }
}

/// Initial data `(w0, w1, w2)`, forcing and Dirichlet data of one problem.
#[derive(Debug, Clone)]
pub struct MgtData {
    pub w0: LiftedField,
    pub w1: LiftedField,
    pub w2: SpectralField,
    pub forcing: Forcing,
    pub g: BoundarySignal,
    pub compat: Compatibility,
}

impl MgtData {
    pub fn new(
        w0: LiftedField,
        w1: LiftedField,
        w2: SpectralField,
        forcing: Forcing,
        g: BoundarySignal,
    ) -> Result<Self> {
        let basis = w0.basis().clone();
        if !basis.same_as(w1.basis()) || !basis.same_as(w2.basis()) {
            return Err(Error::BasisMismatch("initial data live in different bases".into()));
        }
        let nodes = basis.domain().boundary_node_count();
        if g.node_count() != nodes {
            return Err(Error::invalid(format!(
                "boundary signal has {} nodes, domain has {nodes}",
                g.node_count()
            )));
        }
        forcing.sample(&basis, &g.grid)?;
        let close = |a: &[f64], pick: &dyn Fn(usize) -> f64| {
            a.iter().enumerate().all(|(n, v)| (v - pick(n)).abs() <= COMPATIBILITY_TOL)
        };
        let compat = Compatibility {
            zeroth: close(&w0.trace.0, &|n| g.nodes[n].g[0]),
            first: close(&w1.trace.0, &|n| g.nodes[n].g_t[0]),
        };
        Ok(Self { w0, w1, w2, forcing, g, compat })
    }

    /// Homogeneous problem with only `w0` nonzero.
    pub fn from_initial(w0: SpectralField, grid: TimeGrid) -> Result<Self> {
        let basis = w0.basis().clone();
        let nodes = basis.domain().boundary_node_count();
        Self::new(
            LiftedField::interior(w0),
            LiftedField::interior(SpectralField::zeros(basis.clone())),
            SpectralField::zeros(basis),
            Forcing::Zero,
            BoundarySignal::zero(grid, nodes),
        )
    }

    pub fn basis(&self) -> &Arc<EigenBasis> {
        self.w0.basis()
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.g.grid
    }
}

impl Trajectory {
    /// Builds a new trajectory by filling each zero-initialized mode series.
    pub(crate) fn map_modes(self, f: impl Fn(usize, &mut [f64])) -> Trajectory {
        let basis = self.basis().clone();
        let grid = *self.grid();
        let mut modes = self.into_modes();
        for (k, m) in modes.iter_mut().enumerate() {
            f(k, m);
        }
        Trajectory::new(basis, grid, modes).expect("shape preserved")
    }
}
