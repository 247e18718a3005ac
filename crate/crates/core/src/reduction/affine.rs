use num_complex::Complex64;

use super::data::MgtData;
use super::params::{derive_constants, DerivedConstants, MgtParams};
use crate::families::{exp_conv, exp_conv_complex, lift_mode, TimeGrid, Trajectory};
use crate::par::{self, Execution};
use crate::{Error, Result};

/// `λ = e^{-α·} ∗ f` and the transformed forcing
/// `f̃ = e^{γt/2}(λ + γ e^{-κ·} ∗ λ)` with its time derivative.
#[derive(Debug, Clone)]
pub struct ForcingTransform {
    pub lambda: Trajectory,
    pub f_tilde: Trajectory,
    pub f_tilde_t: Trajectory,
}

pub fn forcing_transform(f: &Trajectory, p: &MgtParams) -> Result<ForcingTransform> {
    let d = derive_constants(p)?;
    let grid = *f.grid();
    let h = grid.dt();
    let per_mode = par::map_indexed(Execution::Auto, f.basis().len(), |k| {
        let src = f.mode(k);
        let lambda = exp_conv(-p.alpha, src, h);
        let memory = exp_conv(-d.kappa, &lambda, h);
        let mut ft = Vec::with_capacity(src.len());
        let mut ft_t = Vec::with_capacity(src.len());
        for (m, t) in grid.times().enumerate() {
            let e = (0.5 * d.gamma * t).exp();
            let val = e * (lambda[m] + d.gamma * memory[m]);
            let lam_t = src[m] - p.alpha * lambda[m];
            let mem_t = lambda[m] - d.kappa * memory[m];
            ft.push(val);
            ft_t.push(0.5 * d.gamma * val + e * (lam_t + d.gamma * mem_t));
        }
        (lambda, ft, ft_t)
    });
    let (mut l, mut a, mut b) = (Vec::new(), Vec::new(), Vec::new());
    for (x, y, z) in per_mode {
        l.push(x);
        a.push(y);
        b.push(z);
    }
    let basis = f.basis().clone();
    Ok(ForcingTransform {
        lambda: Trajectory::new(basis.clone(), grid, l)?,
        f_tilde: Trajectory::new(basis.clone(), grid, a)?,
        f_tilde_t: Trajectory::new(basis, grid, b)?,
    })
}

/// Affine terms `H`, `H_t`, `H_tt` of the per-mode Volterra equations.
#[derive(Debug, Clone)]
pub struct AffineTerms {
    pub h: Trajectory,
    pub h_t: Trajectory,
    pub h_tt: Trajectory,
    /// Coefficient of `e^{rt}` in the transformed source:
    /// `h0 w0 + h1 w1 + h2 (w2 - bΔw0)` evaluated at `t = 0`.
    pub phi: Vec<f64>,
    pub forcing: ForcingTransform,
}

/// Per-mode quantities shared by the affine term and the trace decomposition.
pub(crate) struct ModeSetup {
    pub omega: f64,
    /// `v(0) = w0`, `v_t(0) = γ/2 w0 + w1`.
    pub v0: f64,
    pub v1: f64,
    pub phi: f64,
    /// `⟨D g̃, e_k⟩` and two time derivatives, `g̃ = e^{γt/2} g`.
    pub dt: [Vec<f64>; 3],
}

pub(crate) fn mode_setup(data: &MgtData, p: &MgtParams, d: &DerivedConstants, k: usize) -> ModeSetup {
    let basis = data.basis();
    let mu = basis.eigenvalue(k);
    let weights: Vec<f64> = (0..basis.domain().boundary_node_count())
        .map(|n| basis.lifting_weight(k, n))
        .collect();
    let [g0, g1, g2] = lift_mode(&weights, &data.g);
    let half = 0.5 * d.gamma;
    let mut dt = [Vec::new(), Vec::new(), Vec::new()];
    for (m, t) in data.g.grid.times().enumerate() {
        let e = (half * t).exp();
        dt[0].push(e * g0[m]);
        dt[1].push(e * (half * g0[m] + g1[m]));
        dt[2].push(e * (half * half * g0[m] + d.gamma * g1[m] + g2[m]));
    }
    let w0 = data.w0.field.coeffs()[k];
    let w1 = data.w1.field.coeffs()[k];
    let w2 = data.w2.coeffs()[k];
    ModeSetup {
        omega: (p.b * mu).sqrt(),
        v0: w0,
        v1: half * w0 + w1,
        phi: -d.gamma * d.kappa * w0 + d.gamma * w1 + w2 + p.b * mu * (w0 - g0[0]),
        dt,
    }
}

/// `∫₀ᵗ sin(ω(t-s)) e^{rs} ds` and `∫₀ᵗ cos(ω(t-s)) e^{rs} ds`.
pub(crate) fn exp_sine_integrals(r: f64, omega: f64, t: f64) -> (f64, f64) {
    let den = r * r + omega * omega;
    let (s, c) = (omega * t).sin_cos();
    let e = (r * t).exp();
    ((omega * e - omega * c - r * s) / den, (r * e - r * c + omega * s) / den)
}

fn check_signal(data: &MgtData) -> Result<()> {
    for (n, node) in data.g.nodes.iter().enumerate() {
        if node.g_t.iter().chain(&node.g_tt).any(|v| !v.is_finite()) {
            return Err(Error::MissingDerivatives(format!(
                "node {n} lacks finite g_t/g_tt samples"
            )));
        }
    }
    Ok(())
}

/// Builds `H`, `H_t`, `H_tt` from the integrated-by-parts representation.
///
/// Per mode, with `S = sin(ω·)/ω`, `C = cos(ω·)`, `d̃ = ⟨Dg̃, e_k⟩`:
///
/// ```text
/// H    = C(t)(v0 - d̃(0)) + S(t)(v1 - d̃'(0)) + d̃(t) - S⋆d̃'' + Φ S⋆e^{r·} + S⋆f̃
/// H_t  = -ωsin(ωt)(v0 - d̃(0)) + C(t)(v1 - d̃'(0)) + d̃'(t) - C⋆d̃'' + Φ C⋆e^{r·} + S⋆f̃_t
/// H_tt = -ω²C(t)(v0 - d̃(0)) - ωsin(ωt)(v1 - d̃'(0)) + ω sin⋆d̃''
///        + Φ (C(t) + r C⋆e^{r·}) + C⋆f̃_t
/// ```
///
/// `H_t` uses `f̃(0) = 0`, and `H_tt` needs no third derivative of `g`.
pub fn build_affine(data: &MgtData, p: &MgtParams, exec: Execution) -> Result<AffineTerms> {
    check_signal(data)?;
    let d = derive_constants(p)?;
    let basis = data.basis().clone();
    let grid = *data.grid();
    let f = data.forcing.sample(&basis, &grid)?;
    let forcing = forcing_transform(&f, p)?;
    let h = grid.dt();
    let per_mode = par::map_indexed(exec, basis.len(), |k| {
        let ms = mode_setup(data, p, &d, k);
        let w = ms.omega;
        let iw = Complex64::new(0.0, w);
        let qd = exp_conv_complex(iw, &ms.dt[2], h);
        let qf = exp_conv_complex(iw, forcing.f_tilde.mode(k), h);
        let qfp = exp_conv_complex(iw, forcing.f_tilde_t.mode(k), h);
        let a0 = ms.v0 - ms.dt[0][0];
        let a1 = ms.v1 - ms.dt[1][0];
        let n = grid.len();
        let (mut hv, mut ht, mut htt) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
        for (m, t) in grid.times().enumerate() {
            let (s, c) = (w * t).sin_cos();
            let (is, ic) = exp_sine_integrals(d.decay, w, t);
            hv.push(c * a0 + s / w * a1 + ms.dt[0][m] - qd[m].im / w + ms.phi * is / w + qf[m].im / w);
            ht.push(-w * s * a0 + c * a1 + ms.dt[1][m] - qd[m].re + ms.phi * ic + qfp[m].im / w);
            htt.push(
                -w * w * c * a0 - w * s * a1
                    + w * qd[m].im
                    + ms.phi * (c + d.decay * ic)
                    + qfp[m].re,
            );
        }
        (hv, ht, htt, ms.phi)
    });
    let (mut a, mut b, mut c, mut phi) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for (x, y, z, q) in per_mode {
        a.push(x);
        b.push(y);
        c.push(z);
        phi.push(q);
    }
    Ok(AffineTerms {
        h: Trajectory::new(basis.clone(), grid, a)?,
        h_t: Trajectory::new(basis.clone(), grid, b)?,
        h_tt: Trajectory::new(basis, grid, c)?,
        phi,
        forcing,
    })
}

/// `H` from the raw representation, with the boundary term kept as
/// `ω ∫₀ᵗ sin(ω(t-s)) d̃(s) ds`; used to cross-check [`build_affine`].
pub fn build_affine_raw(data: &MgtData, p: &MgtParams) -> Result<Trajectory> {
    let d = derive_constants(p)?;
    let basis = data.basis().clone();
    let grid: TimeGrid = *data.grid();
    let f = data.forcing.sample(&basis, &grid)?;
    let forcing = forcing_transform(&f, p)?;
    let h = grid.dt();
    let modes = par::map_indexed(Execution::Auto, basis.len(), |k| {
        let ms = mode_setup(data, p, &d, k);
        let w = ms.omega;
        let iw = Complex64::new(0.0, w);
        let qb = exp_conv_complex(iw, &ms.dt[0], h);
        let qf = exp_conv_complex(iw, forcing.f_tilde.mode(k), h);
        grid.times()
            .enumerate()
            .map(|(m, t)| {
                let (s, c) = (w * t).sin_cos();
                let (is, _) = exp_sine_integrals(d.decay, w, t);
                c * ms.v0 + s / w * ms.v1 + w * qb[m].im + ms.phi * is / w + qf[m].im / w
            })
            .collect()
    });
    Trajectory::new(basis, grid, modes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{build_basis, DomainSpec, SpectralField};
    use approx::assert_relative_eq;

    #[test]
    fn constant_forcing_transform() {
        let b = build_basis(DomainSpec::interval(32).unwrap(), 2).unwrap();
        let grid = TimeGrid::new(1.0, 50).unwrap();
        let f = Trajectory::from_fn(b, grid, |k, _| if k == 0 { 1.0 } else { 0.0 });
        let out = forcing_transform(&f, &MgtParams::new(2.0, 1.0, 1.0).unwrap()).unwrap();
        for (m, t) in grid.times().enumerate() {
            assert_relative_eq!(out.lambda.mode(0)[m], (1.0 - (-2.0 * t).exp()) / 2.0, epsilon = 1e-14);
        }
        assert_eq!(out.f_tilde.mode(0)[0], 0.0);
        assert!(out.f_tilde.mode(1).iter().all(|v| *v == 0.0));
    }

    #[test]
    fn zero_data_gives_zero_affine_terms() {
        let b = build_basis(DomainSpec::interval(32).unwrap(), 4).unwrap();
        let grid = TimeGrid::new(1.0, 20).unwrap();
        let data = MgtData::from_initial(SpectralField::zeros(b), grid).unwrap();
        let a = build_affine(&data, &MgtParams::new(2.0, 1.0, 1.0).unwrap(), Execution::Auto).unwrap();
        assert!(a.h.is_zero() && a.h_t.is_zero() && a.h_tt.is_zero());
    }

    #[test]
    fn first_mode_affine_term_matches_quadrature() {
        // H = cos(ω₁t) + (γ/2) sin(ω₁t)/ω₁ + (1/ω₁)∫₀ᵗ sin(ω₁(t-s)) [h0(s) + h2(s) μ₁] ds
        let b = build_basis(DomainSpec::interval(32).unwrap(), 3).unwrap();
        let grid = TimeGrid::new(1.0, 100).unwrap();
        let p = MgtParams::new(2.0, 1.0, 1.0).unwrap();
        let d = derive_constants(&p).unwrap();
        let data = MgtData::from_initial(SpectralField::unit(b.clone(), 0), grid).unwrap();
        let a = build_affine(&data, &p, Execution::Sequential).unwrap();
        let mu = b.eigenvalue(0);
        let w = mu.sqrt();
        for (m, t) in grid.times().enumerate() {
            let n = 4000;
            let hq = t / n as f64;
            let quad: f64 = (0..=n)
                .map(|i| {
                    let s = i as f64 * hq;
                    let wt = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
                    wt * (w * (t - s)).sin() * (d.h0(s) + d.h2(s) * mu)
                })
                .sum::<f64>()
                * hq
                / 3.0;
            let expected = (w * t).cos() + 0.5 * d.gamma * (w * t).sin() / w + quad / w;
            assert_relative_eq!(a.h.mode(0)[m], expected, epsilon = 1e-9);
        }
        assert!(a.h.modes()[1..].iter().all(|s| s.iter().all(|v| *v == 0.0)));
    }
}
