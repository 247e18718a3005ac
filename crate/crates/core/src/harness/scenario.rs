use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{DataSpec, ForcingGen, ManufacturedSpec, ScenarioConfig, SpaceGen};
use crate::families::{TimeGrid, Trajectory};
use crate::reduction::{Forcing, ForcingTerm, MgtData, MgtParams};
use crate::spectral::{
    build_basis, dirichlet_map, BoundarySignal, BoundaryValues, EigenBasis, LiftedField,
    Regularity, SpectralField, TimeProfile,
};
use crate::Result;

/// Problem data at one refinement level, with the exact solution when the
/// data were manufactured.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub data: MgtData,
    pub params: MgtParams,
    pub exact: Option<ManufacturedSpec>,
}

impl Scenario {
    pub fn basis(&self) -> &Arc<EigenBasis> {
        self.data.basis()
    }
}

fn padded(coeffs: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for (o, c) in out.iter_mut().zip(coeffs) {
        *o = *c;
    }
    out
}

fn space_coeffs(gen: &SpaceGen, n: usize, seed: u64, stream: u64) -> Vec<f64> {
    match gen {
        SpaceGen::Zero => vec![0.0; n],
        SpaceGen::Modes { coeffs } => padded(coeffs, n),
        SpaceGen::Random { count, amp, decay } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream);
            let draws: Vec<f64> = (1..=*count)
                .map(|k| rng.gen_range(-*amp..=*amp) / (k as f64).powf(*decay))
                .collect();
            padded(&draws, n)
        }
    }
}

/// Smallest regularity class among the time profiles of `g` and `f`.
pub fn data_regularity(spec: &DataSpec) -> Regularity {
    spec.g
        .iter()
        .chain(spec.f.iter().map(|f| &f.profile))
        .map(TimeProfile::regularity)
        .min()
        .unwrap_or(Regularity::Smooth)
}

/// Regularity of the boundary profiles alone.
pub fn boundary_regularity(spec: &DataSpec) -> Regularity {
    spec.g.iter().map(TimeProfile::regularity).min().unwrap_or(Regularity::Smooth)
}

fn manufactured(
    m: &ManufacturedSpec,
    p: &MgtParams,
    basis: &Arc<EigenBasis>,
    grid: TimeGrid,
) -> Result<MgtData> {
    let n = basis.len();
    let a = padded(&m.coeffs, n);
    let (w, ph) = (m.omega, m.phase);
    let scale = |s: f64| -> Vec<f64> { a.iter().map(|v| v * s).collect() };
    let w0 = scale(ph.sin());
    let w1 = scale(w * ph.cos());
    let w2 = scale(-w * w * ph.sin());
    let sin_coeffs = (0..n)
        .map(|k| a[k] * (p.c * p.c * basis.eigenvalue(k) - p.alpha * w * w))
        .collect();
    let cos_coeffs =
        (0..n).map(|k| a[k] * (p.b * basis.eigenvalue(k) * w - w * w * w)).collect();
    let forcing = Forcing::Separable(vec![
        ForcingTerm { profile: TimeProfile::Trig { amp: 1.0, omega: w, phase: ph }, coeffs: sin_coeffs },
        ForcingTerm {
            profile: TimeProfile::Trig { amp: 1.0, omega: w, phase: ph + FRAC_PI_2 },
            coeffs: cos_coeffs,
        },
    ]);
    let nodes = basis.domain().boundary_node_count();
    MgtData::new(
        LiftedField::interior(SpectralField::new(basis.clone(), w0)?),
        LiftedField::interior(SpectralField::new(basis.clone(), w1)?),
        SpectralField::new(basis.clone(), w2)?,
        forcing,
        BoundarySignal::zero(grid, nodes),
    )
}

/// Exact `(w, w_t, w_tt)` of a manufactured scenario on `grid`.
pub fn manufactured_solution(
    m: &ManufacturedSpec,
    basis: &Arc<EigenBasis>,
    grid: TimeGrid,
) -> [Trajectory; 3] {
    let a = padded(&m.coeffs, basis.len());
    let (w, ph) = (m.omega, m.phase);
    [
        Trajectory::from_fn(basis.clone(), grid, |k, t| a[k] * (w * t + ph).sin()),
        Trajectory::from_fn(basis.clone(), grid, |k, t| a[k] * w * (w * t + ph).cos()),
        Trajectory::from_fn(basis.clone(), grid, |k, t| -a[k] * w * w * (w * t + ph).sin()),
    ]
}

/// Builds the data of `cfg` with `n` modes and step `dt`.
pub fn build_scenario(cfg: &ScenarioConfig, n: usize, dt: f64) -> Result<Scenario> {
    let basis = build_basis(cfg.domain, n)?;
    let grid = TimeGrid::with_dt(cfg.time.t_final, dt)?;
    let spec = &cfg.data;
    if let Some(m) = &spec.manufactured {
        let data = manufactured(m, &cfg.params, &basis, grid)?;
        return Ok(Scenario { data, params: cfg.params, exact: Some(m.clone()) });
    }
    let nodes = basis.domain().boundary_node_count();
    let g = if spec.g.is_empty() {
        BoundarySignal::zero(grid, nodes)
    } else {
        BoundarySignal::from_profiles(grid, &spec.g)
    };
    let at_zero = |d: usize| -> BoundaryValues {
        BoundaryValues(
            (0..nodes)
                .map(|i| match spec.g.get(i) {
                    Some(p) if spec.compatible => {
                        let mut q = p.clone();
                        for _ in 0..d {
                            q = q.derive();
                        }
                        q.eval(0.0)
                    }
                    _ => 0.0,
                })
                .collect(),
        )
    };
    let seed = cfg.seed;
    let w0 = LiftedField::from_remainder(basis.clone(), &space_coeffs(&spec.w0, n, seed, 0), at_zero(0))?;
    let w1 = LiftedField::from_remainder(basis.clone(), &space_coeffs(&spec.w1, n, seed, 1), at_zero(1))?;
    let lift2 = dirichlet_map(&basis, &at_zero(2))?.field;
    let w2 = SpectralField::new(basis.clone(), space_coeffs(&spec.w2, n, seed, 2))?.axpy(1.0, &lift2)?;
    let forcing = if spec.f.is_empty() {
        Forcing::Zero
    } else {
        Forcing::Separable(
            spec.f
                .iter()
                .map(|ForcingGen { profile, coeffs }| ForcingTerm {
                    profile: profile.clone(),
                    coeffs: padded(coeffs, n),
                })
                .collect(),
        )
    };
    let data = MgtData::new(w0, w1, w2, forcing, g)?;
    Ok(Scenario { data, params: cfg.params, exact: None })
}

/// Smooth compatible data drawn from `seed`: trigonometric polynomials in
/// space, polynomial plus trigonometric boundary signals and a separable
/// trigonometric forcing.
pub fn random_data_spec(seed: u64, nodes: usize) -> DataSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modes = |count: usize, decay: f64, rng: &mut ChaCha8Rng| {
        (1..=count).map(|k| rng.gen_range(-1.0..=1.0) / (k as f64).powf(decay)).collect::<Vec<_>>()
    };
    let w0 = SpaceGen::Modes { coeffs: modes(6, 2.0, &mut rng) };
    let w1 = SpaceGen::Modes { coeffs: modes(6, 2.0, &mut rng) };
    let w2 = SpaceGen::Modes { coeffs: modes(6, 1.0, &mut rng) };
    let g = (0..nodes)
        .map(|_| TimeProfile::Sum {
            terms: vec![
                TimeProfile::Poly {
                    coeffs: (0..3).map(|_| rng.gen_range(-0.5..=0.5)).collect(),
                },
                TimeProfile::Trig {
                    amp: rng.gen_range(-0.5..=0.5),
                    omega: rng.gen_range(0.5..=3.0),
                    phase: rng.gen_range(0.0..2.0 * PI),
                },
            ],
        })
        .collect();
    let f = vec![ForcingGen {
        profile: TimeProfile::Trig {
            amp: 1.0,
            omega: rng.gen_range(0.5..=4.0),
            phase: rng.gen_range(0.0..2.0 * PI),
        },
        coeffs: modes(6, 2.0, &mut rng),
    }];
    DataSpec { w0, w1, w2, f, g, compatible: true, manufactured: None }
}
