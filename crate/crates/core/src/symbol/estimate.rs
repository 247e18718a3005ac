use serde::{Deserialize, Serialize};

use crate::par::{self, Execution};
use crate::reduction::{Component, MgtData, SolutionBundle};
use crate::spectral::{grid_sobolev_norm, spectral_sobolev_norm, DomainKind, GridFunction};
use crate::{Error, Result};

/// Which a priori estimate to probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateKind {
    /// Weighted estimate for `u = e^{-βt} w` on the space-time cylinder.
    Resolvent,
    /// Unweighted finite-time energy estimate with `s = 0`.
    Semigroup,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub kind: EstimateKind,
    pub weight_beta: f64,
    pub lhs_interior: f64,
    pub lhs_boundary: f64,
    pub lhs_final: f64,
    pub rhs_forcing: f64,
    pub rhs_boundary: f64,
    pub rhs_initial: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub ceiling: f64,
    pub pass: bool,
}

impl ProbeReport {
    /// Relative change of the ratio against a report at another resolution.
    pub fn drift(&self, other: &ProbeReport) -> f64 {
        let scale = self.ratio.abs().max(other.ratio.abs());
        if scale == 0.0 {
            0.0
        } else {
            (self.ratio - other.ratio).abs() / scale
        }
    }
}

/// Squared `L²`, `H¹` and `H²` grid norms.
fn norm_ladder(g: &GridFunction) -> Result<[f64; 3]> {
    Ok([
        grid_sobolev_norm(g, 0)?.powi(2),
        grid_sobolev_norm(g, 1)?.powi(2),
        grid_sobolev_norm(g, 2)?.powi(2),
    ])
}

fn combine(a: &GridFunction, terms: &[(f64, &GridFunction)]) -> GridFunction {
    let mut out = a.clone();
    for v in out.values.iter_mut() {
        *v = 0.0;
    }
    for (c, g) in terms {
        for (o, x) in out.values.iter_mut().zip(&g.values) {
            *o += c * x;
        }
    }
    out
}

fn trapezoid(samples: &[(f64, f64)]) -> f64 {
    samples.windows(2).map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1)).sum()
}

/// Assembles both sides of the chosen estimate from grid norms of the
/// bundle and data, and reports `LHS/RHS` against `ceiling`.
///
/// The cylinder integrals use at most 400 time samples. Initial data enter
/// the right side of both estimates as `‖w0‖²_2 + ‖w1‖²_1 + ‖w2‖²_0`.
pub fn estimate_probe(
    bundle: &SolutionBundle,
    data: &MgtData,
    kind: EstimateKind,
    weight_beta: f64,
    ceiling: f64,
) -> Result<ProbeReport> {
    if data.basis().domain().kind != DomainKind::UnitInterval {
        return Err(Error::Unsupported("estimate probes run on the unit interval".into()));
    }
    if !data.basis().same_as(bundle.w.basis()) || data.grid() != bundle.w.grid() {
        return Err(Error::invalid("bundle and data were built on different grids"));
    }
    let beta = match kind {
        EstimateKind::Resolvent if !(weight_beta > 0.0) => {
            return Err(Error::invalid("weight β must be positive"))
        }
        EstimateKind::Resolvent => weight_beta,
        EstimateKind::Semigroup => 0.0,
    };
    let grid = *bundle.w.grid();
    let stride = grid.steps.div_ceil(400).max(1);
    let mut idx: Vec<usize> = (0..grid.len()).step_by(stride).collect();
    if *idx.last().unwrap() != grid.steps {
        idx.push(grid.steps);
    }
    let forcing = data.forcing.sample(data.basis(), &grid)?;
    let weight = |t: f64| (-2.0 * beta * t).exp();

    let interior = par::try_map_indexed(Execution::Auto, idx.len(), |i| {
        let m = idx[i];
        let t = grid.time(m);
        let w = bundle.lifted_snapshot(Component::W, m).to_grid();
        let wt = bundle.lifted_snapshot(Component::Wt, m).to_grid();
        let wtt = bundle.lifted_snapshot(Component::Wtt, m).to_grid();
        let f_sq: f64 = forcing.modes().iter().map(|s| s[m] * s[m]).sum();
        let value = match kind {
            EstimateKind::Resolvent => {
                let u1 = combine(&w, &[(1.0, &wt), (-beta, &w)]);
                let u2 = combine(&w, &[(1.0, &wtt), (-2.0 * beta, &wt), (beta * beta, &w)]);
                let [a0, a1, a2] = norm_ladder(&w)?;
                let [b0, b1, _] = norm_ladder(&u1)?;
                let c0 = norm_ladder(&u2)?[0];
                let b2 = beta * beta;
                b2 * b2 * a0 + b2 * (b0 + (a1 - a0)) + c0 + (b1 - b0) + (a2 - a1)
            }
            EstimateKind::Semigroup => {
                let a2 = norm_ladder(&w)?[2];
                let b1 = norm_ladder(&wt)?[1];
                let c0 = norm_ladder(&wtt)?[0];
                a2 + b1 + c0
            }
        };
        Ok::<_, Error>((t, weight(t) * value, weight(t) * f_sq))
    })?;
    let interior_int = trapezoid(&interior.iter().map(|r| (r.0, r.1)).collect::<Vec<_>>());
    let forcing_int = trapezoid(&interior.iter().map(|r| (r.0, r.2)).collect::<Vec<_>>());

    let dn_w = bundle.normal_traces(Component::W)?;
    let dn_wt = bundle.normal_traces(Component::Wt)?;
    let mut lhs_b = Vec::with_capacity(grid.len());
    let mut rhs_b = Vec::with_capacity(grid.len());
    for m in 0..grid.len() {
        let t = grid.time(m);
        let (mut l, mut r) = (0.0, 0.0);
        for (n, node) in bundle.g.nodes.iter().enumerate() {
            let (p, q) = (dn_w[n][m], dn_wt[n][m]);
            let (g, gt, gtt) = (node.g[m], node.g_t[m], node.g_tt[m]);
            let b2 = beta * beta;
            match kind {
                EstimateKind::Resolvent => {
                    l += b2 * p * p + (q - beta * p).powi(2);
                    r += b2 * b2 * g * g
                        + b2 * (gt - beta * g).powi(2)
                        + (gtt - 2.0 * beta * gt + b2 * g).powi(2);
                }
                EstimateKind::Semigroup => {
                    l += p * p + q * q;
                    r += g * g + gt * gt + gtt * gtt;
                }
            }
        }
        lhs_b.push((t, weight(t) * l));
        rhs_b.push((t, weight(t) * r));
    }
    let lhs_boundary = trapezoid(&lhs_b);
    let rhs_boundary = trapezoid(&rhs_b);

    let rhs_initial = grid_sobolev_norm(&data.w0.to_grid(), 2)?.powi(2)
        + grid_sobolev_norm(&data.w1.to_grid(), 1)?.powi(2)
        + spectral_sobolev_norm(&data.w2, 0.0).powi(2);

    let (lhs_interior, rhs_forcing, lhs_final) = match kind {
        EstimateKind::Resolvent => (beta * interior_int, forcing_int / beta, 0.0),
        EstimateKind::Semigroup => {
            let last = grid.steps;
            let fin = grid_sobolev_norm(&bundle.lifted_snapshot(Component::W, last).to_grid(), 2)?
                .powi(2)
                + grid_sobolev_norm(&bundle.lifted_snapshot(Component::Wt, last).to_grid(), 1)?
                    .powi(2)
                + grid_sobolev_norm(&bundle.lifted_snapshot(Component::Wtt, last).to_grid(), 0)?
                    .powi(2);
            (interior_int, forcing_int, fin)
        }
    };
    let lhs = lhs_interior + lhs_boundary + lhs_final;
    let rhs = rhs_forcing + rhs_boundary + rhs_initial;
    let ratio = if lhs == 0.0 && rhs == 0.0 {
        0.0
    } else if rhs == 0.0 {
        f64::INFINITY
    } else {
        lhs / rhs
    };
    Ok(ProbeReport {
        kind,
        weight_beta: beta,
        lhs_interior,
        lhs_boundary,
        lhs_final,
        rhs_forcing,
        rhs_boundary,
        rhs_initial,
        lhs,
        rhs,
        ratio,
        ceiling,
        pass: ratio <= ceiling,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::TimeGrid;
    use crate::reduction::{solve_mgt, MgtParams, SolveOptions};
    use crate::spectral::{build_basis, DomainSpec, SpectralField};

    fn first_mode(n: usize, steps: usize) -> (SolutionBundle, MgtData) {
        let basis = build_basis(DomainSpec::interval(128).unwrap(), n).unwrap();
        let grid = TimeGrid::new(1.0, steps).unwrap();
        let data = MgtData::from_initial(SpectralField::unit(basis, 0), grid).unwrap();
        let p = MgtParams::new(2.0, 1.0, 1.0).unwrap();
        (solve_mgt(&data, &p, SolveOptions::default()).unwrap(), data)
    }

    #[test]
    fn zero_data_ratio_is_zero() {
        let basis = build_basis(DomainSpec::interval(64).unwrap(), 8).unwrap();
        let grid = TimeGrid::new(1.0, 200).unwrap();
        let data = MgtData::from_initial(SpectralField::zeros(basis), grid).unwrap();
        let p = MgtParams::new(2.0, 1.0, 1.0).unwrap();
        let bundle = solve_mgt(&data, &p, SolveOptions::default()).unwrap();
        for kind in [EstimateKind::Resolvent, EstimateKind::Semigroup] {
            let r = estimate_probe(&bundle, &data, kind, 2.0, 10.0).unwrap();
            assert_eq!(r.ratio, 0.0);
            assert!(r.pass);
        }
    }

    #[test]
    fn first_mode_ratio_is_refinement_stable() {
        let (b1, d1) = first_mode(16, 500);
        let (b2, d2) = first_mode(32, 1000);
        for kind in [EstimateKind::Resolvent, EstimateKind::Semigroup] {
            let r1 = estimate_probe(&b1, &d1, kind, 2.0, 1e3).unwrap();
            let r2 = estimate_probe(&b2, &d2, kind, 2.0, 1e3).unwrap();
            assert!(r1.ratio.is_finite() && r1.ratio > 0.0);
            assert!(r1.drift(&r2) < 0.1, "{kind:?}: {} vs {}", r1.ratio, r2.ratio);
        }
    }
}
