use super::basis::{DomainKind, EigenBasis};
use super::field::LiftedField;
use crate::{Error, Result};

/// Relative tolerance of the partial-sum Cauchy test (`N/2` versus `N` modes).
pub const TRACE_CAUCHY_TOL: f64 = 0.05;

/// Absolute floor below which a partial-sum difference counts as converged,
/// relative to the total mass of the series.
const TRACE_ABS_FLOOR: f64 = 1e-10;

/// Outward normal derivative `∂_ν u` at a boundary node (the edge midpoint on
/// the square).
pub fn normal_trace(field: &LiftedField, node: usize) -> Result<f64> {
    normal_trace_at(field, node, 0.5)
}

/// `∂_ν u = ∂_ν ψ + Σ r_k ∂_ν e_k` at `(node, s)`, with the Cauchy test
/// applied to the partial sums over the half and full basis.
pub fn normal_trace_at(field: &LiftedField, node: usize, s: f64) -> Result<f64> {
    let basis = field.basis();
    check_node(basis, node)?;
    let lift = field.lifting().normal_derivative(node)?;
    let (mut half, mut full, mut mass) = (lift, lift, lift.abs());
    for (i, r) in field.remainder().iter().enumerate() {
        let t = r * basis.normal_derivative(i, node, s);
        full += t;
        mass += t.abs();
        if basis.in_half_basis(i) {
            half += t;
        }
    }
    cauchy_check(half, full, (full - half).abs(), full.abs(), mass)?;
    Ok(full)
}

/// Normal trace of a time series of fields given by their remainder
/// coefficients (`remainder[mode][sample]`) and the normal derivative of the
/// lifting at each sample. The Cauchy test compares the half and full partial
/// sums in the discrete `L²`-in-time norm.
pub fn normal_trace_series(
    basis: &EigenBasis,
    remainder: &[Vec<f64>],
    lifting_normal: &[f64],
    node: usize,
    s: f64,
) -> Result<Vec<f64>> {
    check_node(basis, node)?;
    if remainder.len() != basis.len() {
        return Err(Error::BasisMismatch(format!(
            "{} mode series for a basis of {} modes",
            remainder.len(),
            basis.len()
        )));
    }
    let samples = lifting_normal.len();
    let mut full = lifting_normal.to_vec();
    let mut half = lifting_normal.to_vec();
    let mut mass = vec![0.0; samples];
    for (i, series) in remainder.iter().enumerate() {
        if series.len() != samples {
            return Err(Error::GridMismatch { expected: samples, actual: series.len() });
        }
        let dn = basis.normal_derivative(i, node, s);
        let in_half = basis.in_half_basis(i);
        for m in 0..samples {
            let t = series[m] * dn;
            full[m] += t;
            mass[m] += t.abs();
            if in_half {
                half[m] += t;
            }
        }
    }
    let l2 = |v: &mut dyn Iterator<Item = f64>| v.map(|x| x * x).sum::<f64>().sqrt();
    let diff = l2(&mut full.iter().zip(&half).map(|(a, b)| a - b));
    let norm_full = l2(&mut full.iter().copied());
    let norm_half = l2(&mut half.iter().copied());
    let norm_mass = l2(&mut mass.iter().zip(lifting_normal).map(|(m, l)| m + l.abs()));
    cauchy_check(norm_half, norm_full, diff, norm_full, norm_mass)?;
    Ok(full)
}

fn check_node(basis: &EigenBasis, node: usize) -> Result<()> {
    let nodes = basis.domain().boundary_node_count();
    if node >= nodes {
        return Err(Error::invalid(format!("boundary node {node} out of range 0..{nodes}")));
    }
    if basis.domain().kind == DomainKind::UnitSquare && basis.mode_count() < 2 {
        return Err(Error::invalid("normal trace needs at least two modes per axis"));
    }
    Ok(())
}

fn cauchy_check(half: f64, full: f64, diff: f64, scale: f64, mass: f64) -> Result<()> {
    if diff <= TRACE_CAUCHY_TOL * scale || diff <= TRACE_ABS_FLOOR * (1.0 + mass) {
        Ok(())
    } else {
        Err(Error::TraceNotConverged { half, full })
    }
}

#[cfg(test)]
mod tests {
    use super::super::basis::{build_basis, DomainSpec};
    use super::super::field::{BoundaryValues, SpectralField};
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{PI, SQRT_2};

    #[test]
    fn trace_of_first_mode() {
        let b = build_basis(DomainSpec::interval(64).unwrap(), 8).unwrap();
        let f = LiftedField::interior(SpectralField::unit(b, 0));
        assert_relative_eq!(normal_trace(&f, 0).unwrap(), -SQRT_2 * PI, epsilon = 1e-12);
        assert_relative_eq!(normal_trace(&f, 1).unwrap(), -SQRT_2 * PI, epsilon = 1e-12);
    }

    #[test]
    fn trace_of_pure_lifting() {
        let b = build_basis(DomainSpec::interval(64).unwrap(), 16).unwrap();
        let f = LiftedField::from_remainder(b, &[0.0; 16], BoundaryValues(vec![1.0, 3.0])).unwrap();
        assert_relative_eq!(normal_trace(&f, 0).unwrap(), -2.0, epsilon = 1e-14);
        assert_relative_eq!(normal_trace(&f, 1).unwrap(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn slowly_decaying_series_fails_cauchy_test() {
        let b = build_basis(DomainSpec::interval(64).unwrap(), 32).unwrap();
        // coefficients ~ 1/k give terms of size O(1): no convergence
        let c: Vec<f64> = (1..=32).map(|k| 1.0 / k as f64).collect();
        let f = LiftedField::interior(SpectralField::new(b, c).unwrap());
        assert!(matches!(normal_trace(&f, 0), Err(Error::TraceNotConverged { .. })));
    }

    #[test]
    fn square_nonzero_lifting_is_unsupported() {
        let b = build_basis(DomainSpec::square(16).unwrap(), 4).unwrap();
        let f = LiftedField::from_remainder(b, &[0.0; 16], BoundaryValues(vec![1.0, 0.0, 0.0, 0.0]))
            .unwrap();
        assert!(matches!(normal_trace(&f, 0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn series_trace_uses_time_norm() {
        let b = build_basis(DomainSpec::interval(64).unwrap(), 8).unwrap();
        let samples = 11;
        let mut rem = vec![vec![0.0; samples]; 8];
        // first mode oscillates through zero; a pointwise relative test would fail at the crossing
        for (m, v) in rem[0].iter_mut().enumerate() {
            *v = (m as f64 * 0.3 - 1.5).sin();
        }
        rem[5] = vec![1e-4; samples];
        let out = normal_trace_series(&b, &rem, &vec![0.0; samples], 0, 0.0).unwrap();
        assert_relative_eq!(out[0], -SQRT_2 * PI * ((-1.5f64).sin() + 6e-4), epsilon = 1e-12);
    }
}
