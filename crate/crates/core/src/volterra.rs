//! Volterra equations of the second kind `v(t) + ∫₀ᵗ ℓ(t-s) v(s) ds = h(t)`
//! with scalar continuous kernels, solved by trapezoidal collocation
//! (forward substitution) or by the Picard (Neumann) series.
//!
//! Kernels given as exponential sums `ℓ(t) = Re Σ cᵢ e^{ρᵢ t}` have O(M)
//! convolution sums through a per-term recursion; general kernels fall back to
//! the O(M²) sum over sampled kernel values. Both paths implement the same
//! discrete operator.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::families::TimeGrid;
use crate::{Error, Result};

/// Smallest admissible `|1 + (h/2) ℓ(0)|`.
pub const PIVOT_FLOOR: f64 = 1e-12;

/// Default truncation tolerance of the Picard series.
pub const DEFAULT_PICARD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Smoothness {
    Continuous,
    Smooth,
}

#[derive(Clone)]
enum Repr {
    Zero,
    /// `Re Σ c e^{ρ t}` as `(c, ρ)` pairs.
    ExpSum(Vec<(Complex64, Complex64)>),
    Function(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

#[derive(Clone)]
pub struct ScalarKernel {
    repr: Repr,
    pub smoothness: Smoothness,
}

impl fmt::Debug for ScalarKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Zero => write!(f, "ScalarKernel::Zero"),
            Repr::ExpSum(t) => f.debug_tuple("ScalarKernel::ExpSum").field(t).finish(),
            Repr::Function(_) => write!(f, "ScalarKernel::Function({:?})", self.smoothness),
        }
    }
}

impl ScalarKernel {
    pub fn zero() -> Self {
        Self { repr: Repr::Zero, smoothness: Smoothness::Smooth }
    }

    pub fn constant(c: f64) -> Self {
        Self::exp_sum(vec![(Complex64::new(c, 0.0), Complex64::new(0.0, 0.0))])
    }

    pub fn exp_sum(terms: Vec<(Complex64, Complex64)>) -> Self {
        Self { repr: Repr::ExpSum(terms), smoothness: Smoothness::Smooth }
    }

    pub fn function(f: impl Fn(f64) -> f64 + Send + Sync + 'static, smoothness: Smoothness) -> Self {
        Self { repr: Repr::Function(Arc::new(f)), smoothness }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match &self.repr {
            Repr::Zero => 0.0,
            Repr::ExpSum(terms) => terms.iter().map(|(c, r)| (c * (r * t).exp()).re).sum(),
            Repr::Function(f) => f(t),
        }
    }

    pub fn sample(&self, grid: &TimeGrid) -> Vec<f64> {
        grid.times().map(|t| self.eval(t)).collect()
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Zero => true,
            Repr::ExpSum(terms) => terms.iter().all(|(c, _)| c.norm() == 0.0),
            Repr::Function(_) => false,
        }
    }

    /// Derivative of an exponential-sum kernel.
    pub fn derivative(&self) -> Option<ScalarKernel> {
        match &self.repr {
            Repr::Zero => Some(Self::zero()),
            Repr::ExpSum(terms) => Some(Self::exp_sum(terms.iter().map(|(c, r)| (c * r, *r)).collect())),
            Repr::Function(_) => None,
        }
    }

    /// Discrete trapezoidal convolution `(ℓ ∗ f)(t_m) ≈ Σ_j w_j ℓ(t_m - t_j) f_j`.
    pub fn convolve(&self, f: &[f64], grid: &TimeGrid) -> Vec<f64> {
        let h = grid.dt();
        let n = f.len();
        match &self.repr {
            Repr::Zero => vec![0.0; n],
            Repr::ExpSum(terms) => {
                let mut out = vec![0.0; n];
                for (c, rho) in terms {
                    let e = (rho * h).exp();
                    let mut u = Complex64::new(0.0, 0.0);
                    for m in 1..n {
                        let wprev = if m == 1 { 0.5 * h } else { h };
                        u = e * (u + f[m - 1] * wprev);
                        out[m] += (c * (u + 0.5 * h * f[m])).re;
                    }
                }
                out
            }
            Repr::Function(_) => {
                let ell = self.sample(grid);
                sampled_convolution(&ell, f, h)
            }
        }
    }
}

/// Trapezoidal convolution of sampled kernel values with sampled data, O(M²).
pub fn sampled_convolution(ell: &[f64], f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; n];
    for m in 1..n {
        let mut acc = 0.5 * (ell[m] * f[0] + ell[0] * f[m]);
        for j in 1..m {
            acc += ell[m - j] * f[j];
        }
        out[m] = h * acc;
    }
    out
}

#[derive(Debug, Clone)]
pub struct VolterraProblem {
    pub kernel: ScalarKernel,
    pub rhs: Vec<f64>,
    pub grid: TimeGrid,
}

impl VolterraProblem {
    pub fn new(kernel: ScalarKernel, rhs: Vec<f64>, grid: TimeGrid) -> Result<Self> {
        if rhs.len() != grid.len() {
            return Err(Error::GridMismatch { expected: grid.len(), actual: rhs.len() });
        }
        Ok(Self { kernel, rhs, grid })
    }

    /// `sup_m |v_m + (ℓ ∗ v)_m - h_m|` for the discrete operator.
    pub fn residual(&self, v: &[f64]) -> f64 {
        let conv = self.kernel.convolve(v, &self.grid);
        v.iter()
            .zip(&conv)
            .zip(&self.rhs)
            .map(|((a, b), c)| (a + b - c).abs())
            .fold(0.0, f64::max)
    }
}

/// Trapezoidal collocation solved by forward substitution.
pub fn solve_direct(p: &VolterraProblem) -> Result<Vec<f64>> {
    let n = p.rhs.len();
    let h = p.grid.dt();
    let mut v = vec![0.0; n];
    v[0] = p.rhs[0];
    if n == 1 {
        return Ok(v);
    }
    let pivot = 1.0 + 0.5 * h * p.kernel.eval(0.0);
    if pivot.abs() < PIVOT_FLOOR {
        return Err(Error::Singular { step: 1, pivot: pivot.abs() });
    }
    match &p.kernel.repr {
        Repr::Zero => v.copy_from_slice(&p.rhs),
        Repr::ExpSum(terms) => {
            let factors: Vec<Complex64> = terms.iter().map(|(_, r)| (r * h).exp()).collect();
            let mut u = vec![Complex64::new(0.0, 0.0); terms.len()];
            for m in 1..n {
                let wprev = if m == 1 { 0.5 * h } else { h };
                let mut hist = 0.0;
                for (i, (c, _)) in terms.iter().enumerate() {
                    u[i] = factors[i] * (u[i] + v[m - 1] * wprev);
                    hist += (c * u[i]).re;
                }
                v[m] = (p.rhs[m] - hist) / pivot;
            }
        }
        Repr::Function(_) => {
            let ell = p.kernel.sample(&p.grid);
            for m in 1..n {
                let mut hist = 0.5 * ell[m] * v[0];
                for j in 1..m {
                    hist += ell[m - j] * v[j];
                }
                v[m] = (p.rhs[m] - h * hist) / pivot;
            }
        }
    }
    Ok(v)
}

#[derive(Debug, Clone)]
pub struct PicardSolution {
    pub v: Vec<f64>,
    /// Index `K` of the first term whose sup-norm fell below the tolerance.
    pub terms_used: usize,
    pub last_term: f64,
}

/// `v = h + Σ_{k≥1} (-1)^k L^{(∗k)} ∗ h`, truncated at the first term below `tol`.
pub fn solve_picard(p: &VolterraProblem, max_terms: usize, tol: f64) -> Result<PicardSolution> {
    if max_terms == 0 {
        return Err(Error::invalid("max_terms must be at least 1"));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid("Picard tolerance must be positive"));
    }
    let mut v = p.rhs.clone();
    let mut term = p.rhs.clone();
    let mut last = f64::INFINITY;
    for k in 1..=max_terms {
        term = p.kernel.convolve(&term, &p.grid);
        term.iter_mut().for_each(|x| *x = -*x);
        last = sup_norm(&term);
        v.iter_mut().zip(&term).for_each(|(a, b)| *a += b);
        if last < tol {
            return Ok(PicardSolution { v, terms_used: k, last_term: last });
        }
    }
    Err(Error::NotConverged { terms: max_terms, last, tol })
}

/// Samples of `L^{(∗n)}` with `L^{(∗1)} = ℓ` and `L^{(∗(n+1))} = ℓ ∗ L^{(∗n)}`.
pub fn iterated_kernel(ell: &ScalarKernel, n: usize, grid: &TimeGrid) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::invalid("iterated kernel order must be at least 1"));
    }
    let mut out = ell.sample(grid);
    for _ in 1..n {
        out = ell.convolve(&out, grid);
    }
    Ok(out)
}

pub fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, x| a.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn problem(kernel: ScalarKernel, h: impl Fn(f64) -> f64, t: f64, steps: usize) -> VolterraProblem {
        let grid = TimeGrid::new(t, steps).unwrap();
        let rhs = grid.times().map(h).collect();
        VolterraProblem::new(kernel, rhs, grid).unwrap()
    }

    fn sine_kernel() -> ScalarKernel {
        ScalarKernel::function(f64::sin, Smoothness::Smooth)
    }

    #[test]
    fn zero_kernel_returns_rhs() {
        let p = problem(ScalarKernel::zero(), |t| 1.0 + t * t, 1.0, 10);
        assert_eq!(solve_direct(&p).unwrap(), p.rhs);
        let s = solve_picard(&p, 5, 1e-10).unwrap();
        assert_eq!(s.v, p.rhs);
        assert_eq!(s.terms_used, 1);
    }

    #[test]
    fn unit_kernel_gives_exponential() {
        let p = problem(ScalarKernel::constant(1.0), |_| 1.0, 1.0, 1000);
        let v = solve_direct(&p).unwrap();
        for (m, t) in p.grid.times().enumerate() {
            assert_relative_eq!(v[m], (-t).exp(), epsilon = 1e-6);
        }
        let s = solve_picard(&p, 60, 1e-12).unwrap();
        for (a, b) in s.v.iter().zip(&v) {
            assert_relative_eq!(a, b, epsilon = 1e-10);
        }
    }

    #[test]
    fn sine_kernel_direct_matches_picard() {
        let p = problem(sine_kernel(), |_| 1.0, 1.0, 1000);
        let d = solve_direct(&p).unwrap();
        let s = solve_picard(&p, 100, 1e-12).unwrap();
        assert!(d.iter().zip(&s.v).all(|(a, b)| (a - b).abs() < 1e-8));
        // Laplace transform: V = (s²+1)/(s(s²+2)), so v = (1 + cos(√2 t))/2
        let exact = |t: f64| 0.5 * (1.0 + (2f64.sqrt() * t).cos());
        assert_relative_eq!(d[1000], exact(1.0), epsilon = 1e-6);
    }

    #[test]
    fn exp_sum_and_function_paths_agree() {
        let es = ScalarKernel::exp_sum(vec![
            (Complex64::new(0.3, -1.2), Complex64::new(0.0, 5.0)),
            (Complex64::new(-0.7, 0.0), Complex64::new(-0.5, 0.0)),
        ]);
        let es2 = es.clone();
        let f = ScalarKernel::function(move |t| es2.eval(t), Smoothness::Smooth);
        let a = problem(es, |t| t.cos(), 2.0, 300);
        let b = VolterraProblem { kernel: f, ..a.clone() };
        let va = solve_direct(&a).unwrap();
        let vb = solve_direct(&b).unwrap();
        assert!(va.iter().zip(&vb).all(|(x, y)| (x - y).abs() < 1e-12));
        assert!(a.residual(&va) < 1e-12);
    }

    #[test]
    fn singular_pivot_is_reported() {
        // 1 + (h/2)·ℓ(0) = 0 for h = 0.1, ℓ ≡ -20
        let p = problem(ScalarKernel::constant(-20.0), |_| 1.0, 1.0, 10);
        assert!(matches!(solve_direct(&p), Err(Error::Singular { .. })));
    }

    #[test]
    fn picard_reports_non_convergence() {
        let p = problem(ScalarKernel::constant(5.0), |_| 1.0, 2.0, 100);
        assert!(matches!(solve_picard(&p, 3, 1e-10), Err(Error::NotConverged { terms: 3, .. })));
        assert!(solve_picard(&p, 0, 1e-10).is_err());
    }

    #[test]
    fn iterated_unit_kernel() {
        let grid = TimeGrid::new(1.0, 50).unwrap();
        let one = ScalarKernel::constant(1.0);
        let l2 = iterated_kernel(&one, 2, &grid).unwrap();
        let l3 = iterated_kernel(&one, 3, &grid).unwrap();
        for (m, t) in grid.times().enumerate() {
            assert_relative_eq!(l2[m], t, epsilon = 1e-13);
            assert_relative_eq!(l3[m], t * t / 2.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn iterated_exponential_kernel() {
        let grid = TimeGrid::new(2.0, 2000).unwrap();
        let e = ScalarKernel::exp_sum(vec![(Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0))]);
        let l2 = iterated_kernel(&e, 2, &grid).unwrap();
        for (m, t) in grid.times().enumerate() {
            assert_relative_eq!(l2[m], t * (-t).exp(), epsilon = 1e-6);
        }
    }
}
