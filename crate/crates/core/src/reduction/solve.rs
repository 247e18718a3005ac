use serde::{Deserialize, Serialize};

use super::affine::build_affine;
use super::bundle::SolutionBundle;
use super::data::MgtData;
use super::kernel::build_kernel;
use super::params::{derive_constants, MgtParams};
use crate::families::Trajectory;
use crate::par::{self, Execution};
use crate::volterra::{solve_direct, solve_picard, VolterraProblem, DEFAULT_PICARD_TOL};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SolveMethod {
    Direct,
    Picard { max_terms: usize, tol: f64 },
}

impl SolveMethod {
    pub fn picard() -> Self {
        SolveMethod::Picard { max_terms: 200, tol: DEFAULT_PICARD_TOL }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub method: SolveMethod,
    #[serde(default)]
    pub exec: Execution,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { method: SolveMethod::Direct, exec: Execution::Auto }
    }
}

impl SolveOptions {
    pub fn with_method(method: SolveMethod) -> Self {
        Self { method, ..Self::default() }
    }
}

fn volterra(p: VolterraProblem, method: SolveMethod) -> Result<(Vec<f64>, usize)> {
    match method {
        SolveMethod::Direct => Ok((solve_direct(&p)?, 0)),
        SolveMethod::Picard { max_terms, tol } => {
            let s = solve_picard(&p, max_terms, tol)?;
            Ok((s.v, s.terms_used))
        }
    }
}

/// Solves the MGT problem mode by mode through three Volterra equations:
///
/// ```text
/// v    + ℓ ∗ v    = H
/// v_t  + ℓ ∗ v_t  = H_t  - ℓ(t) v0
/// v_tt + ℓ ∗ v_tt = H_tt - ℓ'(t) v0 - ℓ(t) v1
/// ```
///
/// then `w = e^{-γt/2} v`, `w_t = e^{-γt/2}(v_t - γ/2 v)`,
/// `w_tt = e^{-γt/2}(v_tt - γ v_t + γ²/4 v)`.
pub fn solve_mgt(data: &MgtData, p: &MgtParams, opts: SolveOptions) -> Result<SolutionBundle> {
    let d = derive_constants(p)?;
    let basis = data.basis().clone();
    let grid = *data.grid();
    let kernels = build_kernel(p, &basis)?;
    let affine = build_affine(data, p, opts.exec)?;
    let half = 0.5 * d.gamma;
    let per_mode = par::try_map_indexed(opts.exec, basis.len(), |k| {
        let kern = &kernels[k];
        let v0 = data.w0.field.coeffs()[k];
        let v1 = half * v0 + data.w1.field.coeffs()[k];
        let ell = kern.ell.sample(&grid);
        let ell_t = kern.ell_t.sample(&grid);
        let solve = |rhs: Vec<f64>| volterra(VolterraProblem::new(kern.ell.clone(), rhs, grid)?, opts.method);
        let (v, n0) = solve(affine.h.mode(k).to_vec())?;
        let rhs_t = affine.h_t.mode(k).iter().zip(&ell).map(|(h, l)| h - l * v0).collect();
        let (v_t, n1) = solve(rhs_t)?;
        let rhs_tt = affine.h_tt.mode(k)
            .iter()
            .zip(ell_t.iter().zip(&ell))
            .map(|(h, (lt, l))| h - lt * v0 - l * v1)
            .collect();
        let (v_tt, n2) = solve(rhs_tt)?;
        let mut w = Vec::with_capacity(grid.len());
        let mut w_t = Vec::with_capacity(grid.len());
        let mut w_tt = Vec::with_capacity(grid.len());
        for (m, t) in grid.times().enumerate() {
            let e = (-half * t).exp();
            w.push(e * v[m]);
            w_t.push(e * (v_t[m] - half * v[m]));
            w_tt.push(e * (v_tt[m] - d.gamma * v_t[m] + half * half * v[m]));
        }
        Ok::<_, crate::Error>(([w, w_t, w_tt, v, v_t, v_tt], n0.max(n1).max(n2)))
    })?;
    let mut cols: [Vec<Vec<f64>>; 6] = Default::default();
    let mut terms = Vec::with_capacity(basis.len());
    for (series, n) in per_mode {
        for (c, s) in cols.iter_mut().zip(series) {
            c.push(s);
        }
        terms.push(n);
    }
    let [w, w_t, w_tt, v, v_t, v_tt] = cols.map(|m| Trajectory::new(basis.clone(), grid, m));
    Ok(SolutionBundle {
        params: *p,
        w: w?,
        w_t: w_t?,
        w_tt: w_tt?,
        v: v?,
        v_t: v_t?,
        v_tt: v_tt?,
        g: data.g.clone(),
        compat: data.compat,
        picard_terms: matches!(opts.method, SolveMethod::Picard { .. }).then_some(terms),
    })
}
