//! Independent ground truth: each eigenmode of the MGT problem obeys the
//! third-order ODE
//!
//! ```text
//! ŵ''' + α ŵ'' + bμ ŵ' + c²μ ŵ = f̂ + c²μ d(t) + bμ d'(t),   d = ⟨Dg, e_k⟩,
//! ```
//!
//! obtained by moving the Laplacian onto `e_k` with Green's identity. It is
//! integrated with classical RK4, evaluating the source at the stage times
//! from closed-form data when available.

use num_complex::Complex64;
use serde::Serialize;

use crate::families::{TimeGrid, Trajectory};
use crate::par::{self, Execution};
use crate::reduction::{MgtData, MgtParams};
use crate::{Error, Result};

/// The projected ODE of one mode.
pub struct ModeOde<'a> {
    pub index: usize,
    pub mu: f64,
    pub params: MgtParams,
    source: Box<dyn Fn(f64) -> f64 + Send + Sync + 'a>,
}

impl<'a> ModeOde<'a> {
    pub fn new(
        index: usize,
        mu: f64,
        params: MgtParams,
        source: impl Fn(f64) -> f64 + Send + Sync + 'a,
    ) -> Self {
        Self { index, mu, params, source: Box::new(source) }
    }

    pub fn homogeneous(index: usize, mu: f64, params: MgtParams) -> Self {
        Self::new(index, mu, params, |_| 0.0)
    }

    /// `(a2, a1, a0)` of `r³ + a2 r² + a1 r + a0`.
    pub fn coefficients(&self) -> (f64, f64, f64) {
        let p = &self.params;
        (p.alpha, p.b * self.mu, p.c * p.c * self.mu)
    }

    fn rhs(&self, t: f64, y: [f64; 3]) -> [f64; 3] {
        let (a2, a1, a0) = self.coefficients();
        [y[1], y[2], (self.source)(t) - a2 * y[2] - a1 * y[1] - a0 * y[0]]
    }
}

/// `(ŵ, ŵ', ŵ'')` sampled on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeTrajectory {
    pub w: Vec<f64>,
    pub w_t: Vec<f64>,
    pub w_tt: Vec<f64>,
}

pub fn integrate_mode(ode: &ModeOde<'_>, initial: (f64, f64, f64), grid: &TimeGrid) -> ModeTrajectory {
    let h = grid.dt();
    let n = grid.len();
    let mut out = ModeTrajectory {
        w: Vec::with_capacity(n),
        w_t: Vec::with_capacity(n),
        w_tt: Vec::with_capacity(n),
    };
    let mut y = [initial.0, initial.1, initial.2];
    let add = |y: [f64; 3], k: [f64; 3], s: f64| [y[0] + s * k[0], y[1] + s * k[1], y[2] + s * k[2]];
    for m in 0..n {
        out.w.push(y[0]);
        out.w_t.push(y[1]);
        out.w_tt.push(y[2]);
        if m + 1 == n {
            break;
        }
        let t = grid.time(m);
        let k1 = ode.rhs(t, y);
        let k2 = ode.rhs(t + 0.5 * h, add(y, k1, 0.5 * h));
        let k3 = ode.rhs(t + 0.5 * h, add(y, k2, 0.5 * h));
        let k4 = ode.rhs(t + h, add(y, k3, h));
        for i in 0..3 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct OracleSolution {
    pub w: Trajectory,
    pub w_t: Trajectory,
    pub w_tt: Trajectory,
    /// Whether every source was evaluated from closed forms at the RK stages.
    pub analytic_sources: bool,
}

/// Linear interpolation of samples at an arbitrary time.
fn interp(samples: &[f64], grid: &TimeGrid, t: f64) -> f64 {
    let x = (t / grid.dt()).clamp(0.0, grid.steps as f64);
    let i = (x.floor() as usize).min(grid.steps.saturating_sub(1));
    let frac = x - i as f64;
    samples[i] * (1.0 - frac) + samples[i + 1] * frac
}

/// Integrates every mode of the problem; sampled data are linearly
/// interpolated at the RK stages, which limits the order to two.
pub fn oracle_solve(data: &MgtData, p: &MgtParams, exec: Execution) -> Result<OracleSolution> {
    p.validate()?;
    let basis = data.basis().clone();
    let grid = *data.grid();
    let nodes = basis.domain().boundary_node_count();
    let profiles = data.g.profiles.clone();
    let derived: Option<Vec<_>> = profiles.as_ref().map(|ps| ps.iter().map(|p| p.derive()).collect());
    let sampled_f = match data.forcing.mode_value(0, 0.0) {
        Some(_) => None,
        None => Some(data.forcing.sample(&basis, &grid)?),
    };
    let analytic = profiles.is_some() && sampled_f.is_none();
    let per_mode = par::map_indexed(exec, basis.len(), |k| {
        let mu = basis.eigenvalue(k);
        let weights: Vec<f64> = (0..nodes).map(|n| basis.lifting_weight(k, n)).collect();
        let source = |t: f64| {
            let f = match &sampled_f {
                Some(tr) => interp(tr.mode(k), &grid, t),
                None => data.forcing.mode_value(k, t).unwrap_or(0.0),
            };
            let (d, d_t) = match (&profiles, &derived) {
                (Some(ps), Some(ds)) => weights.iter().zip(ps.iter().zip(ds)).fold(
                    (0.0, 0.0),
                    |(a, b), (w, (g, gt))| (a + w * g.eval(t), b + w * gt.eval(t)),
                ),
                _ => weights.iter().zip(&data.g.nodes).fold((0.0, 0.0), |(a, b), (w, n)| {
                    (a + w * interp(&n.g, &grid, t), b + w * interp(&n.g_t, &grid, t))
                }),
            };
            f + p.c * p.c * mu * d + p.b * mu * d_t
        };
        let ode = ModeOde::new(k, mu, *p, source);
        let init = (
            data.w0.field.coeffs()[k],
            data.w1.field.coeffs()[k],
            data.w2.coeffs()[k],
        );
        integrate_mode(&ode, init, &grid)
    });
    let (mut w, mut w_t, mut w_tt) = (Vec::new(), Vec::new(), Vec::new());
    for m in per_mode {
        w.push(m.w);
        w_t.push(m.w_t);
        w_tt.push(m.w_tt);
    }
    Ok(OracleSolution {
        w: Trajectory::new(basis.clone(), grid, w)?,
        w_t: Trajectory::new(basis.clone(), grid, w_t)?,
        w_tt: Trajectory::new(basis, grid, w_tt)?,
        analytic_sources: analytic,
    })
}

/// Roots of the monic cubic `r³ + a2 r² + a1 r + a0`.
///
/// One real root comes from the depressed-cubic closed form and is polished
/// by Newton's method; the remaining pair solves the deflated quadratic and
/// is polished on the original cubic.
pub fn cubic_roots(a2: f64, a1: f64, a0: f64) -> [Complex64; 3] {
    let poly = |r: Complex64| ((r + a2) * r + a1) * r + a0;
    let dpoly = |r: Complex64| (3.0 * r + 2.0 * a2) * r + a1;
    let polish = |mut r: Complex64| {
        for _ in 0..8 {
            let d = dpoly(r);
            if d.norm() == 0.0 {
                break;
            }
            let step = poly(r) / d;
            r -= step;
            if step.norm() <= 1e-16 * r.norm().max(1.0) {
                break;
            }
        }
        r
    };
    let shift = a2 / 3.0;
    let p = a1 - a2 * a2 / 3.0;
    let q = 2.0 * a2.powi(3) / 27.0 - a2 * a1 / 3.0 + a0;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    let y = if disc >= 0.0 {
        let s = disc.sqrt();
        (-q / 2.0 + s).cbrt() + (-q / 2.0 - s).cbrt()
    } else {
        let rad = (-p / 3.0).sqrt();
        let phi = (-q / (2.0 * rad.powi(3))).clamp(-1.0, 1.0).acos();
        2.0 * rad * (phi / 3.0).cos()
    };
    let x = polish(Complex64::new(y - shift, 0.0)).re;
    // (r - x)(r² + B r + C)
    let bq = a2 + x;
    let cq = if x.abs() > 1e-8 { -a0 / x } else { a1 + bq * x };
    let disc2 = Complex64::new(bq * bq - 4.0 * cq, 0.0).sqrt();
    let (r1, r2) = if bq >= 0.0 {
        let t = -0.5 * (bq + disc2);
        (t, if t.norm() > 0.0 { cq / t } else { Complex64::new(0.0, 0.0) })
    } else {
        let t = -0.5 * (Complex64::new(bq, 0.0) - disc2);
        (t, if t.norm() > 0.0 { cq / t } else { Complex64::new(0.0, 0.0) })
    };
    let mut roots = [Complex64::new(x, 0.0), polish(r1), polish(r2)];
    // keep conjugate pairs exact
    if roots[1].im.abs() > 0.0 && (roots[1] - roots[2].conj()).norm() < 1e-10 * roots[1].norm().max(1.0) {
        roots[2] = roots[1].conj();
    }
    roots
}

/// `|r³ + a2 r² + a1 r + a0|`.
pub fn cubic_residual(a2: f64, a1: f64, a0: f64, r: Complex64) -> f64 {
    (((r + a2) * r + a1) * r + a0).norm()
}

/// Roots of `r³ + α r² + bμ r + c²μ`.
pub fn characteristic_roots(p: &MgtParams, mu: f64) -> Result<[Complex64; 3]> {
    p.validate()?;
    if !(mu > 0.0) {
        return Err(Error::invalid(format!("μ must be positive, got {mu}")));
    }
    Ok(cubic_roots(p.alpha, p.b * mu, p.c * p.c * mu))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub alpha: f64,
    pub b: f64,
    pub c: f64,
    pub gamma: f64,
    pub mu: f64,
    pub max_re: f64,
}

pub fn stability_threshold_scan(params: &[MgtParams], mus: &[f64]) -> Result<Vec<ScanRow>> {
    if params.is_empty() || mus.is_empty() {
        return Err(Error::invalid("scan grids must be nonempty"));
    }
    let mut rows = Vec::with_capacity(params.len() * mus.len());
    for p in params {
        for &mu in mus {
            let roots = characteristic_roots(p, mu)?;
            rows.push(ScanRow {
                alpha: p.alpha,
                b: p.b,
                c: p.c,
                gamma: p.alpha - p.c * p.c / p.b,
                mu,
                max_re: roots.iter().map(|r| r.re).fold(f64::NEG_INFINITY, f64::max),
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn ref_params() -> MgtParams {
        MgtParams::new(2.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn principal_part_roots() {
        let mu = 7.3;
        let b = 2.0;
        let mut roots = cubic_roots(0.0, b * mu, 0.0);
        roots.sort_by(|x, y| x.im.partial_cmp(&y.im).unwrap());
        let w = (b * mu).sqrt();
        assert!(roots[0].re.abs() < 1e-12 && (roots[0].im + w).abs() < 1e-12);
        assert!(roots[1].norm() < 1e-12);
        assert!(roots[2].re.abs() < 1e-12 && (roots[2].im - w).abs() < 1e-12);
    }

    #[test]
    fn residuals_are_small() {
        for (p, mu) in [
            (ref_params(), PI * PI),
            (MgtParams::new(0.5, 1.0, 1.0).unwrap(), 100.0),
            (MgtParams::new(3.0, 0.1, 2.0).unwrap(), 1000.0),
            (MgtParams::new(10.0, 1.0, 0.1).unwrap(), 1.0),
        ] {
            for r in characteristic_roots(&p, mu).unwrap() {
                assert!(cubic_residual(p.alpha, p.b * mu, p.c * p.c * mu, r) < 1e-9);
            }
        }
    }

    #[test]
    fn three_real_roots() {
        // (r+1)(r+2)(r+3)
        let mut roots: Vec<f64> = cubic_roots(6.0, 11.0, 6.0).iter().map(|r| r.re).collect();
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_relative_eq!(roots[0], -3.0, epsilon = 1e-12);
        assert_relative_eq!(roots[1], -2.0, epsilon = 1e-12);
        assert_relative_eq!(roots[2], -1.0, epsilon = 1e-12);
    }

    #[test]
    fn stability_signs() {
        let stable = characteristic_roots(&ref_params(), PI * PI).unwrap();
        assert!(stable.iter().all(|r| r.re < 0.0));
        let unstable = characteristic_roots(&MgtParams::new(0.5, 1.0, 1.0).unwrap(), 100.0).unwrap();
        assert!(unstable.iter().any(|r| r.re > 0.0));
    }

    #[test]
    fn threshold_scan_rows() {
        let ps = [ref_params(), MgtParams::new(1.0, 1.0, 1.0).unwrap()];
        let rows = stability_threshold_scan(&ps, &[1.0, 10.0, 100.0, 1000.0]).unwrap();
        assert!(rows[..4].iter().all(|r| r.max_re < 0.0));
        assert!(rows[4..].iter().all(|r| r.max_re.abs() < 1e-9));
        assert!(stability_threshold_scan(&[], &[1.0]).is_err());
    }

    #[test]
    fn zero_data_stays_zero() {
        let grid = TimeGrid::new(1.0, 10).unwrap();
        let ode = ModeOde::homogeneous(0, PI * PI, ref_params());
        let out = integrate_mode(&ode, (0.0, 0.0, 0.0), &grid);
        assert!(out.w.iter().chain(&out.w_t).chain(&out.w_tt).all(|v| *v == 0.0));
    }

    #[test]
    fn free_mode_matches_root_expansion() {
        // ŵ = Σ c_j e^{r_j t} with Vandermonde-determined c_j
        let mu = PI * PI;
        let p = ref_params();
        let r = characteristic_roots(&p, mu).unwrap();
        let one = Complex64::new(1.0, 0.0);
        // solve V c = (1,0,0) with V rows (1,1,1), (r), (r²)
        let det = |m: [[Complex64; 3]; 3]| {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        };
        let v = [[one, one, one], [r[0], r[1], r[2]], [r[0] * r[0], r[1] * r[1], r[2] * r[2]]];
        let dv = det(v);
        let c: Vec<Complex64> = (0..3)
            .map(|j| {
                let mut m = v;
                m[0][j] = one;
                m[1][j] = Complex64::new(0.0, 0.0);
                m[2][j] = Complex64::new(0.0, 0.0);
                det(m) / dv
            })
            .collect();
        let grid = TimeGrid::new(1.0, 1000).unwrap();
        let out = integrate_mode(&ModeOde::homogeneous(0, mu, p), (1.0, 0.0, 0.0), &grid);
        for (m, t) in grid.times().enumerate() {
            let exact: f64 = (0..3).map(|j| (c[j] * (r[j] * t).exp()).re).sum();
            assert!((out.w[m] - exact).abs() < 1e-8, "t={t}: {} vs {exact}", out.w[m]);
        }
    }

    #[test]
    fn manufactured_sine() {
        let mu = 4.0 * PI * PI;
        let p = MgtParams::new(1.5, 0.8, 1.1).unwrap();
        let (a2, a1, a0) = (p.alpha, p.b * mu, p.c * p.c * mu);
        // ŵ = sin t: ŵ''' + a2 ŵ'' + a1 ŵ' + a0 ŵ = -cos t - a2 sin t + a1 cos t + a0 sin t
        let src = move |t: f64| (a1 - 1.0) * t.cos() + (a0 - a2) * t.sin();
        let ode = ModeOde::new(1, mu, p, src);
        let grid = TimeGrid::new(1.0, 1000).unwrap();
        let out = integrate_mode(&ode, (0.0, 1.0, 0.0), &grid);
        for (m, t) in grid.times().enumerate() {
            assert!((out.w[m] - t.sin()).abs() < 1e-8);
        }
    }
}
