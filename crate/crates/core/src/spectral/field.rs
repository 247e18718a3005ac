use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::basis::{DomainKind, DomainSpec, EigenBasis};
use super::lifting::Lifting;
use crate::{Error, Result};

/// Constant Dirichlet data per boundary node.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BoundaryValues(pub Vec<f64>);

impl BoundaryValues {
    pub fn zeros(nodes: usize) -> Self {
        Self(vec![0.0; nodes])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0.0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Truncated expansion `Σ c_k e_k` in a fixed eigenbasis.
#[derive(Debug, Clone)]
pub struct SpectralField {
    basis: Arc<EigenBasis>,
    coeffs: Vec<f64>,
}

impl SpectralField {
    pub fn new(basis: Arc<EigenBasis>, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != basis.len() {
            return Err(Error::BasisMismatch(format!(
                "{} coefficients for a basis of {} modes",
                coeffs.len(),
                basis.len()
            )));
        }
        Ok(Self { basis, coeffs })
    }

    pub fn zeros(basis: Arc<EigenBasis>) -> Self {
        let n = basis.len();
        Self { basis, coeffs: vec![0.0; n] }
    }

    /// The eigenfunction `e_i` itself.
    pub fn unit(basis: Arc<EigenBasis>, i: usize) -> Self {
        let mut f = Self::zeros(basis);
        f.coeffs[i] = 1.0;
        f
    }

    pub fn basis(&self) -> &Arc<EigenBasis> {
        &self.basis
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * self.basis.eval(i, point))
            .sum()
    }

    pub fn check_same_basis(&self, other: &SpectralField) -> Result<()> {
        if self.basis.same_as(&other.basis) {
            Ok(())
        } else {
            Err(Error::BasisMismatch("fields live in different bases".into()))
        }
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: f64, other: &SpectralField) -> Result<SpectralField> {
        self.check_same_basis(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| x + a * y)
            .collect();
        Ok(Self { basis: self.basis.clone(), coeffs })
    }

    pub fn scaled(&self, a: f64) -> SpectralField {
        Self {
            basis: self.basis.clone(),
            coeffs: self.coeffs.iter().map(|c| a * c).collect(),
        }
    }

    /// `A u = Σ -μ_k c_k e_k` for a field with zero trace.
    pub fn apply_laplacian(&self) -> SpectralField {
        Self {
            basis: self.basis.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(self.basis.eigenvalues())
                .map(|(c, mu)| -mu * c)
                .collect(),
        }
    }
}

/// A field with possibly nonzero Dirichlet trace: `u = ψ + Σ r_k e_k` where
/// `ψ` is the harmonic lifting of the trace and `r_k = ⟨u - ψ, e_k⟩` decays
/// like the coefficients of an `H¹₀` function. `coeffs` stores the full
/// coefficients `⟨u, e_k⟩ = r_k + ⟨ψ, e_k⟩`.
#[derive(Debug, Clone)]
pub struct LiftedField {
    pub field: SpectralField,
    pub trace: BoundaryValues,
}

impl LiftedField {
    pub fn new(field: SpectralField, trace: BoundaryValues) -> Result<Self> {
        let nodes = field.basis().domain().boundary_node_count();
        if trace.len() != nodes {
            return Err(Error::invalid(format!(
                "trace has {} nodes, domain has {nodes}",
                trace.len()
            )));
        }
        Ok(Self { field, trace })
    }

    /// Field with zero trace.
    pub fn interior(field: SpectralField) -> Self {
        let nodes = field.basis().domain().boundary_node_count();
        Self { field, trace: BoundaryValues::zeros(nodes) }
    }

    /// Builds a lifted field from its remainder coefficients and trace.
    pub fn from_remainder(
        basis: Arc<EigenBasis>,
        remainder: &[f64],
        trace: BoundaryValues,
    ) -> Result<Self> {
        let mut coeffs = remainder.to_vec();
        for (i, c) in coeffs.iter_mut().enumerate() {
            *c += lifting_coeff(&basis, i, &trace.0);
        }
        Self::new(SpectralField::new(basis, coeffs)?, trace)
    }

    pub fn basis(&self) -> &Arc<EigenBasis> {
        self.field.basis()
    }

    /// `r_k = ⟨u, e_k⟩ - ⟨ψ, e_k⟩`.
    pub fn remainder(&self) -> Vec<f64> {
        let basis = self.basis();
        self.field
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| c - lifting_coeff(basis, i, &self.trace.0))
            .collect()
    }

    pub fn lifting(&self) -> Lifting {
        Lifting::new(*self.basis().domain(), self.trace.clone())
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        let basis = self.basis();
        let r: f64 = self
            .remainder()
            .iter()
            .enumerate()
            .map(|(i, c)| c * basis.eval(i, point))
            .sum();
        r + self.lifting().eval(point)
    }

    /// Samples the field on the physical grid of its domain.
    pub fn to_grid(&self) -> GridFunction {
        let basis = self.basis();
        let domain = *basis.domain();
        let n = domain.grid_points_per_axis;
        let h = domain.grid_spacing();
        let remainder = self.remainder();
        let lifting = self.lifting();
        let values = match domain.kind {
            DomainKind::UnitInterval => {
                let mut v: Vec<f64> = (0..=n).map(|i| lifting.eval(&[i as f64 * h])).collect();
                for (r, s) in remainder.iter().zip(basis.axis_sines()) {
                    if *r == 0.0 {
                        continue;
                    }
                    let a = std::f64::consts::SQRT_2 * r;
                    for (vi, si) in v.iter_mut().zip(s) {
                        *vi += a * si;
                    }
                }
                v
            }
            DomainKind::UnitSquare => {
                let mut v = Vec::with_capacity((n + 1) * (n + 1));
                for i in 0..=n {
                    for j in 0..=n {
                        v.push(lifting.eval(&[i as f64 * h, j as f64 * h]));
                    }
                }
                // separable accumulation: Σ_{jk} r_{jk} 2 sin(jπx) sin(kπy)
                let nm = basis.mode_count();
                let s = basis.axis_sines();
                for (m, r) in remainder.iter().enumerate() {
                    if *r == 0.0 {
                        continue;
                    }
                    let (a, b) = (m / nm, m % nm);
                    for i in 0..=n {
                        let sx = 2.0 * r * s[a][i];
                        for j in 0..=n {
                            v[i * (n + 1) + j] += sx * s[b][j];
                        }
                    }
                }
                v
            }
        };
        GridFunction { domain, values }
    }
}

pub(crate) fn lifting_coeff(basis: &EigenBasis, i: usize, trace: &[f64]) -> f64 {
    trace
        .iter()
        .enumerate()
        .filter(|(_, v)| **v != 0.0)
        .map(|(node, v)| v * basis.lifting_weight(i, node))
        .sum()
}

/// Node values on the uniform physical grid, row-major `[ix][iy]` on the square.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridFunction {
    pub domain: DomainSpec,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn from_fn(domain: DomainSpec, f: impl Fn(&[f64]) -> f64) -> Self {
        let n = domain.grid_points_per_axis;
        let h = domain.grid_spacing();
        let values = match domain.kind {
            DomainKind::UnitInterval => (0..=n).map(|i| f(&[i as f64 * h])).collect(),
            DomainKind::UnitSquare => (0..=n)
                .flat_map(|i| (0..=n).map(move |j| (i, j)))
                .map(|(i, j)| f(&[i as f64 * h, j as f64 * h]))
                .collect(),
        };
        Self { domain, values }
    }

    pub fn max_abs_diff(&self, other: &GridFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::super::basis::build_basis;
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn coefficient_length_is_checked() {
        let b = build_basis(DomainSpec::interval(32).unwrap(), 4).unwrap();
        assert!(matches!(
            SpectralField::new(b, vec![0.0; 3]),
            Err(Error::BasisMismatch(_))
        ));
    }

    #[test]
    fn mismatched_bases_are_rejected() {
        let a = build_basis(DomainSpec::interval(32).unwrap(), 4).unwrap();
        let b = build_basis(DomainSpec::interval(32).unwrap(), 5).unwrap();
        let fa = SpectralField::zeros(a);
        let fb = SpectralField::zeros(b);
        assert!(fa.axpy(1.0, &fb).is_err());
    }

    #[test]
    fn remainder_roundtrip() {
        let b = build_basis(DomainSpec::interval(32).unwrap(), 6).unwrap();
        let r = vec![0.1, -0.2, 0.0, 0.05, 0.0, 0.01];
        let f = LiftedField::from_remainder(b, &r, BoundaryValues(vec![1.0, -0.5])).unwrap();
        for (x, y) in f.remainder().iter().zip(&r) {
            assert_relative_eq!(x, y, epsilon = 1e-15);
        }
    }

    #[test]
    fn lifted_field_hits_boundary_values() {
        let b = build_basis(DomainSpec::interval(64).unwrap(), 8).unwrap();
        let f = LiftedField::from_remainder(b, &[0.3; 8], BoundaryValues(vec![2.0, 1.0])).unwrap();
        let g = f.to_grid();
        assert_relative_eq!(g.values[0], 2.0, epsilon = 1e-12);
        assert_relative_eq!(*g.values.last().unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn square_grid_matches_pointwise_eval() {
        let b = build_basis(DomainSpec::square(8).unwrap(), 3).unwrap();
        let r: Vec<f64> = (0..9).map(|i| 0.1 * i as f64 - 0.3).collect();
        let f = LiftedField::from_remainder(b, &r, BoundaryValues::zeros(4)).unwrap();
        let g = f.to_grid();
        let h = 1.0 / 8.0;
        assert_relative_eq!(g.values[3 * 9 + 5], f.eval(&[3.0 * h, 5.0 * h]), epsilon = 1e-12);
    }
}
