use num_complex::Complex64;

use super::cosine::CosineFamily;
use super::grid::Trajectory;
use super::quad::{cos_conv, exp_conv_complex, sin_conv};
use crate::par::{self, Execution};
use crate::spectral::{
    normal_trace_series, BoundarySignal, DomainKind, EigenBasis, SpectralField,
};
use crate::{Error, Result};

/// `(𝒦f)(t) = ∫₀ᵗ sin(ω_k(t-s))/ω_k f̂_k(s) ds` per mode: the zero-data
/// solution operator of `z_tt = s²Δz + f`. For a unit-speed family this is
/// `𝒜⁻¹∫₀ᵗ R_-(t-s) f(s) ds`.
pub fn kop_apply(fam: &CosineFamily, f: &Trajectory) -> Result<Trajectory> {
    check_basis(fam, f.basis())?;
    let h = f.grid().dt();
    let modes = par::map_indexed(Execution::Auto, fam.basis().len(), |k| {
        let w = fam.omega(k);
        sin_conv(w, f.mode(k), h).into_iter().map(|v| v / w).collect()
    });
    Trajectory::new(fam.basis().clone(), *f.grid(), modes)
}

/// Per-mode solution of `z_tt = s²Δz + f`, `z|_Γ = g`, `z(0) = z0`, `z_t(0) = z1`.
#[derive(Debug, Clone)]
pub struct WaveSolution {
    /// Full coefficients `⟨z(t), e_k⟩`.
    pub z: Trajectory,
    pub z_t: Trajectory,
    /// `⟨z - Dg, e_k⟩`.
    pub remainder: Trajectory,
    /// `⟨z_t - Dg_t, e_k⟩`.
    pub remainder_t: Trajectory,
    pub g: BoundarySignal,
}

impl WaveSolution {
    /// `∂_ν z` per boundary node.
    pub fn normal_traces(&self) -> Result<Vec<Vec<f64>>> {
        let values: Vec<&[f64]> = self.g.nodes.iter().map(|n| n.g.as_slice()).collect();
        trajectory_normal_traces(&self.remainder, &values)
    }

    /// `∂_ν z_t` per boundary node.
    pub fn normal_traces_t(&self) -> Result<Vec<Vec<f64>>> {
        let values: Vec<&[f64]> = self.g.nodes.iter().map(|n| n.g_t.as_slice()).collect();
        trajectory_normal_traces(&self.remainder_t, &values)
    }
}

/// Representation formula in integrated-by-parts form: with `d = ⟨Dg, e_k⟩`,
/// `z_k = d + C_k(t)(z0 - d(0)) + sin(ω t)/ω (z1 - d'(0)) + (sin(ω·)/ω) ⋆ (f_k - d'')`.
pub fn wave_solve(
    fam: &CosineFamily,
    z0: &SpectralField,
    z1: &SpectralField,
    f: Option<&Trajectory>,
    g: &BoundarySignal,
) -> Result<WaveSolution> {
    let basis = fam.basis();
    check_basis(fam, z0.basis())?;
    check_basis(fam, z1.basis())?;
    check_signal(basis, g)?;
    let grid = g.grid;
    if let Some(f) = f {
        check_basis(fam, f.basis())?;
        if *f.grid() != grid {
            return Err(Error::GridMismatch { expected: grid.len(), actual: f.samples() });
        }
    }
    let weights = basis.lifting_weights();
    let h = grid.dt();
    let per_mode = par::map_indexed(Execution::Auto, basis.len(), |k| {
        let w = fam.omega(k);
        let [d, d_t, d_tt] = lift_mode(&weights[k], g);
        let r0 = z0.coeffs()[k] - d[0];
        let r1 = z1.coeffs()[k] - d_t[0];
        let src: Vec<f64> = match f {
            Some(f) => f.mode(k).iter().zip(&d_tt).map(|(a, b)| a - b).collect(),
            None => d_tt.iter().map(|v| -v).collect(),
        };
        let q = exp_conv_complex(Complex64::new(0.0, w), &src, h);
        let mut rem = Vec::with_capacity(grid.len());
        let mut rem_t = Vec::with_capacity(grid.len());
        for (m, t) in grid.times().enumerate() {
            let (s, c) = (w * t).sin_cos();
            rem.push(c * r0 + s / w * r1 + q[m].im / w);
            rem_t.push(-w * s * r0 + c * r1 + q[m].re);
        }
        let z: Vec<f64> = rem.iter().zip(&d).map(|(a, b)| a + b).collect();
        let z_t: Vec<f64> = rem_t.iter().zip(&d_t).map(|(a, b)| a + b).collect();
        (z, z_t, rem, rem_t)
    });
    let mut cols: [Vec<Vec<f64>>; 4] = Default::default();
    for (z, z_t, r, r_t) in per_mode {
        cols[0].push(z);
        cols[1].push(z_t);
        cols[2].push(r);
        cols[3].push(r_t);
    }
    let [z, z_t, remainder, remainder_t] = cols.map(|m| Trajectory::new(basis.clone(), grid, m));
    Ok(WaveSolution { z: z?, z_t: z_t?, remainder: remainder?, remainder_t: remainder_t?, g: g.clone() })
}

/// Representation formula in its raw form
/// `z_k = C_k(t) z0 + sin(ωt)/ω z1 + (sin(ω·)/ω) ⋆ f_k + ω (sin(ω·) ⋆ d)`,
/// which needs no time derivatives of `g`.
pub fn wave_solve_raw(
    fam: &CosineFamily,
    z0: &SpectralField,
    z1: &SpectralField,
    f: Option<&Trajectory>,
    g: &BoundarySignal,
) -> Result<Trajectory> {
    let basis = fam.basis();
    check_basis(fam, z0.basis())?;
    check_basis(fam, z1.basis())?;
    check_signal(basis, g)?;
    let grid = g.grid;
    let weights = basis.lifting_weights();
    let h = grid.dt();
    let modes = par::map_indexed(Execution::Auto, basis.len(), |k| {
        let w = fam.omega(k);
        let d = lift_values(&weights[k], g, |n| &n.g);
        let boundary = sin_conv(w, &d, h);
        let forced = f.map(|f| sin_conv(w, f.mode(k), h));
        grid.times()
            .enumerate()
            .map(|(m, t)| {
                let (s, c) = (w * t).sin_cos();
                let mut v = c * z0.coeffs()[k] + s / w * z1.coeffs()[k] + w * boundary[m];
                if let Some(fc) = &forced {
                    v += fc[m] / w;
                }
                v
            })
            .collect()
    });
    Trajectory::new(basis.clone(), grid, modes)
}

/// `L²`-norm time series of the boundary-to-interior convolutions
/// `𝒜∫₀ᵗ R_-(t-s) Dg(s) ds` and `𝒜∫₀ᵗ R_+(t-s) Dg(s) ds`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryProbe {
    pub minus: Vec<f64>,
    pub plus: Vec<f64>,
}

impl BoundaryProbe {
    pub fn sup_minus(&self) -> f64 {
        self.minus.iter().copied().fold(0.0, f64::max)
    }

    pub fn sup_plus(&self) -> f64 {
        self.plus.iter().copied().fold(0.0, f64::max)
    }
}

pub fn boundary_convolution_probe(fam: &CosineFamily, g: &BoundarySignal) -> Result<BoundaryProbe> {
    let basis = fam.basis();
    check_signal(basis, g)?;
    let h = g.grid.dt();
    let weights = basis.lifting_weights();
    let per_mode = par::map_indexed(Execution::Auto, basis.len(), |k| {
        let d = lift_values(&weights[k], g, |n| &n.g);
        let root_mu = basis.eigenvalue(k).sqrt();
        let w = fam.omega(k);
        let minus: Vec<f64> = sin_conv(w, &d, h).iter().map(|v| root_mu * v).collect();
        let plus: Vec<f64> = cos_conv(w, &d, h).iter().map(|v| root_mu * v).collect();
        (minus, plus)
    });
    let mut minus = vec![0.0; g.grid.len()];
    let mut plus = vec![0.0; g.grid.len()];
    for (mi, pl) in &per_mode {
        for m in 0..minus.len() {
            minus[m] += mi[m] * mi[m];
            plus[m] += pl[m] * pl[m];
        }
    }
    Ok(BoundaryProbe {
        minus: minus.into_iter().map(f64::sqrt).collect(),
        plus: plus.into_iter().map(f64::sqrt).collect(),
    })
}

/// Normal derivative of the harmonic lifting of node data at every sample.
pub fn lifting_normal_series(kind: DomainKind, node: usize, values: &[&[f64]]) -> Result<Vec<f64>> {
    let samples = values.first().map_or(0, |v| v.len());
    match kind {
        DomainKind::UnitInterval => {
            let sign = if node == 0 { -1.0 } else { 1.0 };
            Ok((0..samples).map(|m| sign * (values[1][m] - values[0][m])).collect())
        }
        DomainKind::UnitSquare => {
            if values.iter().all(|v| v.iter().all(|x| *x == 0.0)) {
                Ok(vec![0.0; samples])
            } else {
                Err(Error::Unsupported("normal trace of a nonzero square lifting".into()))
            }
        }
    }
}

/// `∂_ν u` per boundary node for `u = Σ r_k e_k + D(values)`; square traces
/// are taken at edge midpoints.
pub fn trajectory_normal_traces(remainder: &Trajectory, values: &[&[f64]]) -> Result<Vec<Vec<f64>>> {
    let basis = remainder.basis();
    let kind = basis.domain().kind;
    (0..basis.domain().boundary_node_count())
        .map(|node| {
            let lift = lifting_normal_series(kind, node, values)?;
            normal_trace_series(basis, remainder.modes(), &lift, node, 0.5)
        })
        .collect()
}

fn check_basis(fam: &CosineFamily, basis: &EigenBasis) -> Result<()> {
    if fam.basis().as_ref() == basis {
        Ok(())
    } else {
        Err(Error::BasisMismatch("operand and family use different bases".into()))
    }
}

fn check_signal(basis: &EigenBasis, g: &BoundarySignal) -> Result<()> {
    let nodes = basis.domain().boundary_node_count();
    if g.node_count() != nodes {
        return Err(Error::invalid(format!(
            "boundary signal has {} nodes, domain has {nodes}",
            g.node_count()
        )));
    }
    Ok(())
}

pub(crate) fn lift_values(
    weights: &[f64],
    g: &BoundarySignal,
    pick: impl Fn(&crate::spectral::NodeSignal) -> &Vec<f64>,
) -> Vec<f64> {
    let mut d = vec![0.0; g.grid.len()];
    for (w, node) in weights.iter().zip(&g.nodes) {
        for (di, gi) in d.iter_mut().zip(pick(node)) {
            *di += w * gi;
        }
    }
    d
}

/// `⟨Dg, e_k⟩`, `⟨Dg_t, e_k⟩`, `⟨Dg_tt, e_k⟩` for one mode.
pub(crate) fn lift_mode(weights: &[f64], g: &BoundarySignal) -> [Vec<f64>; 3] {
    [
        lift_values(weights, g, |n| &n.g),
        lift_values(weights, g, |n| &n.g_t),
        lift_values(weights, g, |n| &n.g_tt),
    ]
}
