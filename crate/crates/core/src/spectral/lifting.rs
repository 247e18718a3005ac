use std::f64::consts::PI;
use std::sync::Arc;

use super::basis::{DomainKind, DomainSpec, EigenBasis};
use super::field::{lifting_coeff, BoundaryValues, LiftedField, SpectralField};
use crate::{Error, Result};

/// Odd sine terms used for the series form of the square lifting.
const SQUARE_SERIES_TERMS: usize = 1500;

/// Harmonic extension `ψ = Dφ` of node-constant Dirichlet data.
///
/// On the interval `ψ(x) = φ₀ + (φ₁ - φ₀) x`. On the square each edge
/// contributes a sinh series; distinct edge values make `ψ` discontinuous at
/// the corners, so such data only lies in `H^{1/2-ε}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lifting {
    domain: DomainSpec,
    values: BoundaryValues,
}

impl Lifting {
    pub fn new(domain: DomainSpec, values: BoundaryValues) -> Self {
        Self { domain, values }
    }

    pub fn values(&self) -> &BoundaryValues {
        &self.values
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        let v = &self.values.0;
        match self.domain.kind {
            DomainKind::UnitInterval => v[0] + (v[1] - v[0]) * point[0],
            DomainKind::UnitSquare => {
                let (x, y) = (point[0], point[1]);
                edge_series(v[0], x, y)
                    + edge_series(v[1], y, 1.0 - x)
                    + edge_series(v[2], x, 1.0 - y)
                    + edge_series(v[3], y, x)
            }
        }
    }

    /// `∂_ν ψ` at an interval endpoint.
    pub fn normal_derivative(&self, node: usize) -> Result<f64> {
        match self.domain.kind {
            DomainKind::UnitInterval => {
                let slope = self.values.0[1] - self.values.0[0];
                Ok(if node == 0 { -slope } else { slope })
            }
            DomainKind::UnitSquare if self.values.is_zero() => Ok(0.0),
            DomainKind::UnitSquare => Err(Error::Unsupported(
                "normal derivative of a nonzero square lifting".into(),
            )),
        }
    }
}

/// Harmonic function on the square equal to `a` on the edge `dist = 0` and
/// zero on the other three edges; `along` runs parallel to that edge.
fn edge_series(a: f64, along: f64, dist: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    if dist <= 0.0 {
        return a;
    }
    let mut sum = 0.0;
    for m in 0..SQUARE_SERIES_TERMS {
        let n = (2 * m + 1) as f64;
        // sinh(nπ(1-d))/sinh(nπ) without overflow
        let ratio = (-n * PI * dist).exp() * (1.0 - (-2.0 * n * PI * (1.0 - dist)).exp())
            / (1.0 - (-2.0 * n * PI).exp());
        if ratio < 1e-18 {
            break;
        }
        sum += 4.0 / (n * PI) * (n * PI * along).sin() * ratio;
    }
    a * sum
}

/// The projected lifting together with its closed form.
#[derive(Debug, Clone)]
pub struct DirichletLift {
    /// `⟨Dφ, e_k⟩ = -(1/μ_k) Σ_nodes φ_node ∮ ∂_ν e_k`.
    pub field: SpectralField,
    pub lifting: Lifting,
}

impl DirichletLift {
    pub fn into_lifted(self) -> LiftedField {
        LiftedField { field: self.field, trace: self.lifting.values }
    }
}

pub fn dirichlet_map(basis: &Arc<EigenBasis>, values: &BoundaryValues) -> Result<DirichletLift> {
    let nodes = basis.domain().boundary_node_count();
    if values.len() != nodes {
        return Err(Error::invalid(format!(
            "boundary data has {} nodes, domain has {nodes}",
            values.len()
        )));
    }
    let coeffs = (0..basis.len()).map(|i| lifting_coeff(basis, i, &values.0)).collect();
    Ok(DirichletLift {
        field: SpectralField::new(basis.clone(), coeffs)?,
        lifting: Lifting::new(*basis.domain(), values.clone()),
    })
}
