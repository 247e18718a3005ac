use mgt_core::families::TimeGrid;
use mgt_core::oracle::oracle_solve;
use mgt_core::reduction::{
    solve_mgt, trace_decomposition, Forcing, ForcingTerm, MgtData, MgtParams, SolveMethod,
    SolveOptions,
};
use mgt_core::spectral::{
    build_basis, dirichlet_map, BoundarySignal, BoundaryValues, DomainSpec, LiftedField,
    SpectralField, TimeProfile,
};
use mgt_core::Execution;

fn first_mode_case(n: usize, steps: usize) -> (MgtData, MgtParams) {
    let basis = build_basis(DomainSpec::interval(64).unwrap(), n).unwrap();
    let grid = TimeGrid::new(1.0, steps).unwrap();
    let data = MgtData::from_initial(SpectralField::unit(basis, 0), grid).unwrap();
    (data, MgtParams::new(2.0, 1.0, 1.0).unwrap())
}

#[test]
fn first_mode_agrees_with_oracle() {
    let (data, p) = first_mode_case(32, 10_000);
    let red = solve_mgt(&data, &p, SolveOptions::default()).unwrap();
    let ora = oracle_solve(&data, &p, Execution::Auto).unwrap();
    let err = red.w.relative_sup_l2_error(&ora.w, 1e-12).unwrap();
    assert!(err < 1e-6, "relative error {err:e}");
}

#[test]
fn picard_and_direct_agree_on_the_reduction() {
    let (data, p) = first_mode_case(8, 2000);
    let direct = solve_mgt(&data, &p, SolveOptions::default()).unwrap();
    let picard = solve_mgt(&data, &p, SolveOptions::with_method(SolveMethod::picard())).unwrap();
    let err = picard.w.relative_sup_l2_error(&direct.w, 1e-12).unwrap();
    assert!(err < 1e-6, "relative error {err:e}");
    assert!(picard.picard_terms.unwrap().iter().all(|k| *k >= 1));
}

fn boundary_case(n: usize, steps: usize) -> MgtData {
    let basis = build_basis(DomainSpec::interval(128).unwrap(), n).unwrap();
    let grid = TimeGrid::new(1.0, steps).unwrap();
    // g(t,0) = sin(2t), g(t,1) = t², compatible initial data
    let g = BoundarySignal::from_profiles(
        grid,
        &[
            TimeProfile::Trig { amp: 1.0, omega: 2.0, phase: 0.0 },
            TimeProfile::Poly { coeffs: vec![0.0, 0.0, 1.0] },
        ],
    );
    let bump: Vec<f64> = (1..=n).map(|k| if k <= 3 { 0.3 / k as f64 } else { 0.0 }).collect();
    let w0 = LiftedField::from_remainder(basis.clone(), &bump, BoundaryValues(vec![0.0, 0.0])).unwrap();
    let w1 = LiftedField::new(
        dirichlet_map(&basis, &BoundaryValues(vec![2.0, 0.0])).unwrap().field,
        BoundaryValues(vec![2.0, 0.0]),
    )
    .unwrap();
    let mut w2 = vec![0.0; n];
    w2[1] = 0.5;
    let forcing = Forcing::Separable(vec![ForcingTerm {
        profile: TimeProfile::Exp { amp: 1.0, rate: -1.0 },
        coeffs: (0..n).map(|k| if k == 0 { 1.0 } else { 0.0 }).collect(),
    }]);
    MgtData::new(w0, w1, SpectralField::new(basis, w2).unwrap(), forcing, g).unwrap()
}

#[test]
fn boundary_and_forcing_agree_with_oracle() {
    for p in [
        MgtParams::new(2.0, 1.0, 1.0).unwrap(),
        MgtParams::new(1.2, 0.5, 0.6).unwrap(),
        MgtParams::new(0.5, 1.0, 1.0).unwrap(),
    ] {
        let data = boundary_case(16, 4000);
        assert!(data.compat.all());
        let red = solve_mgt(&data, &p, SolveOptions::default()).unwrap();
        let ora = oracle_solve(&data, &p, Execution::Auto).unwrap();
        for (a, b, name) in [(&red.w, &ora.w, "w"), (&red.w_t, &ora.w_t, "w_t"), (&red.w_tt, &ora.w_tt, "w_tt")] {
            let err = a.relative_sup_l2_error(b, 1e-12).unwrap();
            assert!(err < 1e-5, "{p:?} {name}: relative error {err:e}");
        }
    }
}

#[test]
fn decomposition_identity_holds() {
    let p = MgtParams::new(1.2, 0.5, 0.6).unwrap();
    let data = boundary_case(16, 4000);
    let red = solve_mgt(&data, &p, SolveOptions::default()).unwrap();
    let dec = trace_decomposition(&data, &p, &red, 1e-6).unwrap();
    assert!(dec.residual < 1e-6, "{}", dec.residual);
}
