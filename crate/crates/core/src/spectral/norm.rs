use serde::{Deserialize, Serialize};

use super::basis::DomainKind;
use super::field::{GridFunction, LiftedField, SpectralField};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormMethod {
    /// `(Σ (1 + μ_k)^s c_k²)^{1/2}`, only defined for zero-trace fields when `s > 0`.
    Spectral,
    /// Finite differences plus trapezoid quadrature on the physical grid.
    #[default]
    Grid,
}

pub fn spectral_sobolev_norm(field: &SpectralField, s: f64) -> f64 {
    field
        .coeffs()
        .iter()
        .zip(field.basis().eigenvalues())
        .map(|(c, mu)| (1.0 + mu).powf(s) * c * c)
        .sum::<f64>()
        .sqrt()
}

pub fn sobolev_norm(field: &LiftedField, s: u32, method: NormMethod) -> Result<f64> {
    match method {
        NormMethod::Spectral => {
            if s > 0 && !field.trace.is_zero() {
                return Err(Error::Unsupported(
                    "spectral H^s norm of a field with nonzero trace".into(),
                ));
            }
            Ok(spectral_sobolev_norm(&field.field, s as f64))
        }
        NormMethod::Grid => grid_sobolev_norm(&field.to_grid(), s),
    }
}

/// Standard `H^s` norm `(Σ_{|α| ≤ s} ‖∂^α u‖²_{L²})^{1/2}` of grid data for
/// `s ∈ {0, 1, 2}`. First derivatives are cell differences integrated by the
/// midpoint rule; second derivatives are centred in the interior and
/// second-order one-sided at the boundary.
pub fn grid_sobolev_norm(g: &GridFunction, s: u32) -> Result<f64> {
    if s > 2 {
        return Err(Error::invalid(format!("grid Sobolev norm supports s <= 2, got {s}")));
    }
    let n = g.domain.grid_points_per_axis;
    let h = g.domain.grid_spacing();
    let sq = match g.domain.kind {
        DomainKind::UnitInterval => {
            if g.values.len() != n + 1 {
                return Err(Error::GridMismatch { expected: n + 1, actual: g.values.len() });
            }
            line_seminorms_sq(&g.values, h, s)
        }
        DomainKind::UnitSquare => {
            if g.values.len() != (n + 1) * (n + 1) {
                return Err(Error::GridMismatch {
                    expected: (n + 1) * (n + 1),
                    actual: g.values.len(),
                });
            }
            square_seminorms_sq(&g.values, n, h, s)
        }
    };
    Ok(sq.sqrt())
}

fn trapezoid(v: &[f64], h: f64) -> f64 {
    let n = v.len();
    h * (v[1..n - 1].iter().sum::<f64>() + 0.5 * (v[0] + v[n - 1]))
}

fn second_difference(u: &[f64], h: f64) -> Vec<f64> {
    let n = u.len() - 1;
    let h2 = h * h;
    let mut d = vec![0.0; n + 1];
    for i in 1..n {
        d[i] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / h2;
    }
    d[0] = (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) / h2;
    d[n] = (2.0 * u[n] - 5.0 * u[n - 1] + 4.0 * u[n - 2] - u[n - 3]) / h2;
    d
}

fn line_seminorms_sq(u: &[f64], h: f64, s: u32) -> f64 {
    let sq: Vec<f64> = u.iter().map(|v| v * v).collect();
    let mut total = trapezoid(&sq, h);
    if s >= 1 {
        total += u.windows(2).map(|w| ((w[1] - w[0]) / h).powi(2)).sum::<f64>() * h;
    }
    if s >= 2 {
        let d2: Vec<f64> = second_difference(u, h).iter().map(|v| v * v).collect();
        total += trapezoid(&d2, h);
    }
    total
}

fn square_seminorms_sq(u: &[f64], n: usize, h: f64, s: u32) -> f64 {
    let at = |i: usize, j: usize| u[i * (n + 1) + j];
    let w = |i: usize| if i == 0 || i == n { 0.5 } else { 1.0 };
    let mut total = 0.0;
    for i in 0..=n {
        for j in 0..=n {
            total += w(i) * w(j) * at(i, j).powi(2);
        }
    }
    total *= h * h;
    if s >= 1 {
        let mut grad = 0.0;
        for i in 0..n {
            for j in 0..=n {
                grad += w(j) * ((at(i + 1, j) - at(i, j)) / h).powi(2);
                grad += w(j) * ((at(j, i + 1) - at(j, i)) / h).powi(2);
            }
        }
        total += grad * h * h;
    }
    if s >= 2 {
        let mut hess = 0.0;
        let mut line = vec![0.0; n + 1];
        for fixed in 0..=n {
            for (k, v) in line.iter_mut().enumerate() {
                *v = at(k, fixed);
            }
            let dxx = second_difference(&line, h);
            for (k, v) in line.iter_mut().enumerate() {
                *v = at(fixed, k);
            }
            let dyy = second_difference(&line, h);
            for k in 0..=n {
                hess += w(k) * w(fixed) * (dxx[k].powi(2) + dyy[k].powi(2));
            }
        }
        let mut mixed = 0.0;
        for i in 0..n {
            for j in 0..n {
                let d = (at(i + 1, j + 1) - at(i + 1, j) - at(i, j + 1) + at(i, j)) / (h * h);
                mixed += d * d;
            }
        }
        total += (hess + mixed) * h * h;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::super::basis::{build_basis, DomainSpec};
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn first_mode_h1_norm() {
        let b = build_basis(DomainSpec::interval(256).unwrap(), 4).unwrap();
        let f = LiftedField::interior(SpectralField::unit(b, 0));
        let expected = (1.0 + PI * PI).sqrt();
        let grid = sobolev_norm(&f, 1, NormMethod::Grid).unwrap();
        let spec = sobolev_norm(&f, 1, NormMethod::Spectral).unwrap();
        assert_relative_eq!(spec, expected, max_relative = 1e-14);
        assert!((grid - expected).abs() / expected < 0.01);
    }

    #[test]
    fn first_mode_h2_norm() {
        let b = build_basis(DomainSpec::interval(512).unwrap(), 4).unwrap();
        let f = LiftedField::interior(SpectralField::unit(b, 0));
        let pi2 = PI * PI;
        let expected = (1.0 + pi2 + pi2 * pi2).sqrt();
        let grid = sobolev_norm(&f, 2, NormMethod::Grid).unwrap();
        assert!((grid - expected).abs() / expected < 1e-3);
    }

    #[test]
    fn square_mode_norms() {
        let b = build_basis(DomainSpec::square(128).unwrap(), 2).unwrap();
        let i = b.index_of(super::super::basis::Mode::Plane(1, 2)).unwrap();
        let f = LiftedField::interior(SpectralField::unit(b.clone(), i));
        let mu = b.eigenvalue(i);
        let h1 = sobolev_norm(&f, 1, NormMethod::Grid).unwrap();
        assert!((h1 - (1.0 + mu).sqrt()).abs() / (1.0 + mu).sqrt() < 0.01);
        // ∂_xx, ∂_xy, ∂_yy of 2 sin(πx) sin(2πy) give π⁴(1 + 4 + 16)
        let h2 = sobolev_norm(&f, 2, NormMethod::Grid).unwrap();
        let exact = (1.0 + mu + 21.0 * PI.powi(4)).sqrt();
        assert!((h2 - exact).abs() / exact < 0.01, "{h2} vs {exact}");
    }

    #[test]
    fn linear_function_has_exact_grid_norm() {
        let d = DomainSpec::interval(16).unwrap();
        let g = GridFunction::from_fn(d, |p| 2.0 * p[0] - 1.0);
        // ∫(2x-1)² = 1/3, ∫ 2² = 4
        assert_relative_eq!(
            grid_sobolev_norm(&g, 1).unwrap(),
            (1.0 / 3.0 + 4.0_f64).sqrt(),
            max_relative = 1e-2
        );
        assert_relative_eq!(
            grid_sobolev_norm(&g, 2).unwrap(),
            grid_sobolev_norm(&g, 1).unwrap(),
            epsilon = 1e-10
        );
    }

    #[test]
    fn spectral_norm_rejects_nonzero_trace() {
        let b = build_basis(DomainSpec::interval(32).unwrap(), 4).unwrap();
        let f = LiftedField::from_remainder(
            b,
            &[0.0; 4],
            super::super::field::BoundaryValues(vec![1.0, 0.0]),
        )
        .unwrap();
        assert!(sobolev_norm(&f, 1, NormMethod::Spectral).is_err());
        assert!(sobolev_norm(&f, 0, NormMethod::Spectral).is_ok());
        assert!(grid_sobolev_norm(&f.to_grid(), 3).is_err());
    }
}
