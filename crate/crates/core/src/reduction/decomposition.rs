use super::affine::{exp_sine_integrals, forcing_transform};
use super::bundle::{Component, SolutionBundle};
use super::data::MgtData;
use super::params::{derive_constants, MgtParams};
use crate::families::{
    exp_conv, kop_apply, trajectory_normal_traces, wave_solve, CosineFamily, Trajectory,
    WaveSolution,
};
use crate::spectral::{BoundarySignal, NodeSignal, SpectralField};
use crate::{Error, Result};

/// Splitting `v = z + v21 + v22` where `z` solves the wave problem
/// `z_tt = bΔz + β v + K ∗ v + e^{rt}(h0-part + h1-part)`, `z|_Γ = g̃`,
/// `v21 = 𝒦(e^{r·}(w2 - bΔw0))` and `v22 = 𝒦 f̃`.
#[derive(Debug, Clone)]
pub struct TraceDecomposition {
    pub z: WaveSolution,
    pub v21: Trajectory,
    pub v22: Trajectory,
    /// `sup_t ‖v - (z + v21 + v22)‖_{L²}`.
    pub residual: f64,
}

/// Normal traces per boundary node of each piece and of `w_t`.
#[derive(Debug, Clone)]
pub struct DecompositionTraces {
    pub z: Vec<Vec<f64>>,
    pub v21: Vec<Vec<f64>>,
    pub v22: Vec<Vec<f64>>,
    pub w_t: Vec<Vec<f64>>,
}

impl TraceDecomposition {
    pub fn traces(&self, bundle: &SolutionBundle) -> Result<DecompositionTraces> {
        let zero = vec![0.0; self.v21.samples()];
        let nodes = self.v21.basis().domain().boundary_node_count();
        let zeros: Vec<&[f64]> = vec![zero.as_slice(); nodes];
        Ok(DecompositionTraces {
            z: self.z.normal_traces()?,
            v21: trajectory_normal_traces(&self.v21, &zeros)?,
            v22: trajectory_normal_traces(&self.v22, &zeros)?,
            w_t: bundle.normal_traces(Component::Wt)?,
        })
    }
}

/// `g̃ = e^{γt/2} g` with derivatives by the product rule.
fn transformed_signal(g: &BoundarySignal, gamma: f64) -> Result<BoundarySignal> {
    let half = 0.5 * gamma;
    let e: Vec<f64> = g.grid.times().map(|t| (half * t).exp()).collect();
    let nodes = g
        .nodes
        .iter()
        .map(|n| {
            let mut out = NodeSignal { g: vec![], g_t: vec![], g_tt: vec![] };
            for (m, em) in e.iter().enumerate() {
                out.g.push(em * n.g[m]);
                out.g_t.push(em * (half * n.g[m] + n.g_t[m]));
                out.g_tt.push(em * (half * half * n.g[m] + gamma * n.g_t[m] + n.g_tt[m]));
            }
            out
        })
        .collect();
    BoundarySignal::from_parts(g.grid, nodes)
}

pub fn trace_decomposition(
    data: &MgtData,
    p: &MgtParams,
    bundle: &SolutionBundle,
    tol: f64,
) -> Result<TraceDecomposition> {
    let d = derive_constants(p)?;
    let basis = data.basis().clone();
    let grid = *data.grid();
    bundle.v.check_compatible(&Trajectory::zeros(basis.clone(), grid))?;
    let fam = CosineFamily::new(basis.clone(), p.b.sqrt())?;
    let h = grid.dt();
    let w0 = data.w0.field.coeffs();
    let w1 = data.w1.field.coeffs();
    let w2 = data.w2.coeffs();

    let source = Trajectory::zeros(basis.clone(), grid).map_modes(|k, out| {
        let v = bundle.v.mode(k);
        let mem = exp_conv(d.decay, v, h);
        let c1 = -d.gamma * d.kappa * w0[k] + d.gamma * w1[k];
        for (m, t) in grid.times().enumerate() {
            out[m] = d.volterra_beta * v[m] + d.k0 * mem[m] + c1 * (d.decay * t).exp();
        }
    });
    let v0 = SpectralField::new(basis.clone(), w0.to_vec())?;
    let v1 = SpectralField::new(
        basis.clone(),
        w0.iter().zip(w1).map(|(a, b)| 0.5 * d.gamma * a + b).collect(),
    )?;
    let g_tilde = transformed_signal(&data.g, d.gamma)?;
    let z = wave_solve(&fam, &v0, &v1, Some(&source), &g_tilde)?;

    let v21 = Trajectory::zeros(basis.clone(), grid).map_modes(|k, out| {
        let mu = basis.eigenvalue(k);
        let omega = fam.omega(k);
        let d0: f64 = (0..data.g.node_count())
            .map(|n| basis.lifting_weight(k, n) * data.g.nodes[n].g[0])
            .sum();
        let c21 = w2[k] + p.b * mu * (w0[k] - d0);
        for (m, t) in grid.times().enumerate() {
            out[m] = c21 * exp_sine_integrals(d.decay, omega, t).0 / omega;
        }
    });
    let f = data.forcing.sample(&basis, &grid)?;
    let v22 = kop_apply(&fam, &forcing_transform(&f, p)?.f_tilde)?;

    let mut residual = 0.0f64;
    for m in 0..grid.len() {
        let mut sq = 0.0;
        for k in 0..basis.len() {
            let r = bundle.v.mode(k)[m] - z.z.mode(k)[m] - v21.mode(k)[m] - v22.mode(k)[m];
            sq += r * r;
        }
        residual = residual.max(sq.sqrt());
    }
    if residual > tol {
        return Err(Error::IdentityCheck { what: "v = z + v21 + v22".into(), residual, tol });
    }
    Ok(TraceDecomposition { z, v21, v22, residual })
}
