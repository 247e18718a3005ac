use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::par::{self, Execution};
use crate::{Error, Result};

type C = Complex64;

/// Dual variables `(τ, β, η)`; `β > 0` is the exponential time weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyPoint {
    pub tau: f64,
    pub weight_beta: f64,
    pub eta: Vec<f64>,
}

impl FrequencyPoint {
    pub fn new(tau: f64, weight_beta: f64, eta: Vec<f64>) -> Self {
        Self { tau, weight_beta, eta }
    }

    pub fn eta_sq(&self) -> f64 {
        self.eta.iter().map(|e| e * e).sum()
    }

    /// `ρ = (τ² + β² + |η|²)^{1/2}`.
    pub fn radius(&self) -> f64 {
        (self.tau * self.tau + self.weight_beta * self.weight_beta + self.eta_sq()).sqrt()
    }

    /// Projection onto the unit sphere `τ² + β² + |η|² = 1`.
    pub fn normalized(&self) -> Self {
        let r = self.radius();
        Self {
            tau: self.tau / r,
            weight_beta: self.weight_beta / r,
            eta: self.eta.iter().map(|e| e / r).collect(),
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { tau: s * self.tau, weight_beta: s * self.weight_beta, eta: self.eta.iter().map(|e| s * e).collect() }
    }

    /// `iτ + β`.
    fn s(&self) -> C {
        C::new(self.weight_beta, self.tau)
    }

    fn check(&self) -> Result<()> {
        if !(self.weight_beta > 0.0) {
            return Err(Error::Degenerate(format!(
                "weight β must be positive (got {}); the pencil degenerates at β = 0",
                self.weight_beta
            )));
        }
        Ok(())
    }
}

/// Tangential principal symbol `G(τ - iβ, η)`, the normal coefficient
/// matrix `A^d = diag(1, 1, 0)` and the Dirichlet boundary row `B = e₁ᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSymbol {
    pub g: [[C; 3]; 3],
    pub ad: [[f64; 3]; 3],
    pub b_row: [f64; 3],
}

impl SystemSymbol {
    pub fn new(pt: &FrequencyPoint, b: f64) -> Self {
        let rho = pt.radius();
        let s = pt.s();
        let zero = C::new(0.0, 0.0);
        let mut g = [[zero; 3]; 3];
        g[0][1] = C::new(rho, 0.0);
        g[1][2] = C::new(rho, 0.0);
        g[2][0] = -(s * s * s + b * pt.eta_sq() * s) / (rho * rho);
        g[2][2] = b * s;
        Self { g, ad: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]], b_row: [1.0, 0.0, 0.0] }
    }

    /// `det(λ A^d - G)`.
    pub fn pencil_det(&self, lambda: C) -> C {
        let m: [[C; 3]; 3] =
            std::array::from_fn(|i| std::array::from_fn(|j| lambda * self.ad[i][j] - self.g[i][j]));
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// `‖(λ A^d - G) z‖`.
    pub fn pencil_residual(&self, lambda: C, z: &[C; 3]) -> f64 {
        (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| (lambda * self.ad[i][j] - self.g[i][j]) * z[j])
                    .sum::<C>()
                    .norm_sqr()
            })
            .sum::<f64>()
            .sqrt()
    }
}

/// `(λ₊, λ₋)` with `λ² = |η|² + (iτ + β)²/b`; `λ₊` is the root with positive
/// real part.
pub fn finite_eigenvalues(pt: &FrequencyPoint, b: f64) -> Result<(C, C)> {
    pt.check()?;
    if !(b > 0.0) {
        return Err(Error::invalid("b must be positive"));
    }
    let s = pt.s();
    let lam = (pt.eta_sq() + s * s / b).sqrt();
    Ok((lam, -lam))
}

/// Unit generator of the stable subspace, `(1, λ₋/ρ, λ₋²/ρ²)` normalized,
/// with `ρ = (τ² + β² + |η|²)^{1/2}`.
pub fn stable_subspace(pt: &FrequencyPoint, b: f64) -> Result<[C; 3]> {
    let (_, lm) = finite_eigenvalues(pt, b)?;
    let rho = pt.radius();
    let z = [C::new(1.0, 0.0), lm / rho, lm * lm / (rho * rho)];
    let norm = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    Ok(z.map(|c| c / norm))
}

fn boundary_ratio(pt: &FrequencyPoint, b: f64) -> Result<f64> {
    let z = stable_subspace(pt, b)?;
    Ok(z[0].norm())
}

/// Lower bound of `|Bz|/|z|` on the unit sphere, from
/// `|λ|² ≤ |η|² + (τ² + β²)/b ≤ max(1, 1/b)`.
pub fn lopatinskii_floor(b: f64) -> f64 {
    let m = 1.0f64.max(1.0 / b);
    1.0 / (1.0 + m + m * m).sqrt()
}

/// Minimum over `θ` for one `β` of the sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub beta: f64,
    pub tau: f64,
    pub eta: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub b: f64,
    pub min_ratio: f64,
    pub argmin: FrequencyPoint,
    pub samples: usize,
    pub floor: f64,
    pub rows: Vec<SweepRow>,
}

/// Minimizes `|Bz|/|z|` over normalized points with one tangential frequency.
///
/// `β` runs over a log grid on `[10⁻⁶, 1]` merged with a uniform grid on
/// `(0, 1]`; for each `β` the circle `τ² + η² = 1 - β²` is sampled uniformly.
pub fn lopatinskii_sweep(b: f64, samples: usize, exec: Execution) -> Result<SweepResult> {
    if samples < 1000 {
        return Err(Error::invalid(format!("sweep needs at least 1000 samples, got {samples}")));
    }
    if !(b > 0.0) {
        return Err(Error::invalid("b must be positive"));
    }
    let n_beta = ((samples as f64).sqrt().round() as usize).max(20);
    let n_theta = samples.div_ceil(n_beta);
    let n_log = n_beta / 2;
    let mut betas: Vec<f64> = (0..n_log)
        .map(|i| 10f64.powf(-6.0 + 6.0 * i as f64 / (n_log - 1) as f64))
        .chain((1..=n_beta - n_log).map(|i| i as f64 / (n_beta - n_log) as f64))
        .collect();
    betas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let rows = par::try_map_indexed(exec, betas.len(), |i| {
        let beta = betas[i];
        let r = (1.0 - beta * beta).max(0.0).sqrt();
        let mut best = SweepRow { beta, tau: 0.0, eta: 0.0, ratio: f64::INFINITY };
        for j in 0..n_theta {
            let th = 2.0 * std::f64::consts::PI * j as f64 / n_theta as f64;
            let pt = FrequencyPoint::new(r * th.cos(), beta, vec![r * th.sin()]);
            let ratio = boundary_ratio(&pt, b)?;
            if ratio < best.ratio {
                best = SweepRow { beta, tau: pt.tau, eta: pt.eta[0], ratio };
            }
        }
        Ok::<_, Error>(best)
    })?;
    let best = rows
        .iter()
        .min_by(|a, b| a.ratio.partial_cmp(&b.ratio).unwrap())
        .expect("nonempty sweep");
    Ok(SweepResult {
        b,
        min_ratio: best.ratio,
        argmin: FrequencyPoint::new(best.tau, best.beta, vec![best.eta]),
        samples: n_beta * n_theta,
        floor: lopatinskii_floor(b),
        rows,
    })
}
