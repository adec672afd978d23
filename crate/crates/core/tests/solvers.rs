use nalgebra::DMatrix;
use proptest::prelude::*;
use pseudomode_core::amplitude::ResidueAmplitude;
use pseudomode_core::*;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn params_strategy() -> impl Strategy<Value = ReservoirParams> {
    (0.0..2.0f64, 0.0..2.0f64, 0.01..10.0f64, 0.01..10.0f64)
        .prop_map(|(g1, g2, l1, l2)| ReservoirParams::new(g1, g2, l1, l2).unwrap())
}

fn damped_jc(t: f64, gamma: f64, lambda: f64) -> Complex64 {
    let d = Complex64::new(lambda * lambda - 2.0 * gamma * lambda, 0.0).sqrt();
    let x = d * (t / 2.0);
    (x.cosh() + x.sinh() * (lambda / d)) * (-lambda * t / 2.0).exp()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn residue_and_ode_agree(p in params_strategy()) {
        prop_assume!(!characteristic_cubic(&p).is_degenerate());
        let grid = TimeGrid::uniform(50.0, 1001).unwrap();
        let traj = amplitude_ode(&grid, &p, one()).unwrap();
        let res = ResidueAmplitude::new(&p, one()).unwrap();
        for (t, m) in grid.times().iter().zip(&traj.m1) {
            let err = (res.amplitude(*t) - m).norm();
            prop_assert!(err < 1e-8, "t={} err={:e} params={}", t, err, p);
        }
    }

    #[test]
    fn population_is_conserved(p in params_strategy()) {
        let grid = TimeGrid::uniform(50.0, 501).unwrap();
        let traj = amplitude_ode(&grid, &p, one()).unwrap();
        prop_assert!(traj.population_total(0) == 1.0);
        prop_assert!(traj.max_population_defect() < 1e-6, "{:e}", traj.max_population_defect());
    }

    #[test]
    fn amplitude_is_contractive(p in params_strategy(), t in 0.0..50.0f64) {
        let solver = AmplitudeSolver::excited(&p, 50.0).unwrap();
        prop_assert!(solver.amplitude(t).norm() <= 1.0 + 1e-12);
        let traj = amplitude_ode(&TimeGrid::uniform(50.0, 201).unwrap(), &p, one()).unwrap();
        prop_assert!(traj.survival.iter().all(|&s| (0.0..=1.0 + 1e-12).contains(&s)));
    }

    #[test]
    fn vieta_relations(p in params_strategy()) {
        let cubic = characteristic_cubic(&p);
        let [l1, l2] = p.lambdas();
        let sum: Complex64 = cubic.roots.iter().sum();
        let prod: Complex64 = cubic.roots.iter().product();
        let want_sum = -(l1 + l2);
        let want_prod = -l1 * l2 * (p.gamma1() + p.gamma2()) / 2.0;
        prop_assert!((sum - want_sum).norm() <= 1e-10 * want_sum.abs());
        prop_assert!((prod - want_prod).norm() <= 1e-10 * want_prod.abs() + 1e-13);
        for r in &cubic.roots {
            prop_assert!(r.re <= 1e-12);
            prop_assert!(cubic.eval_denominator(*r).norm() <= 1e-12 * cubic.denominator_scale(*r));
        }
    }

    #[test]
    fn residue_starts_at_initial_amplitude(p in params_strategy(), re in -1.0..1.0f64, im in -1.0..1.0f64) {
        prop_assume!(!characteristic_cubic(&p).is_degenerate());
        let m0 = Complex64::new(re, im) * 0.7;
        prop_assert!((amplitude_residue(0.0, &p, m0).unwrap() - m0).norm() < 1e-12);
    }

    #[test]
    fn single_lorentzian_limit(g in 0.0..2.0f64, l in 0.01..10.0f64, l2 in 0.01..10.0f64) {
        let p = ReservoirParams::new(g, 0.0, l, l2).unwrap();
        let solver = AmplitudeSolver::excited(&p, 20.0).unwrap();
        for k in 0..=40 {
            let t = 0.5 * k as f64;
            prop_assert!((solver.amplitude(t) - damped_jc(t, g, l)).norm() < 1e-9, "t={}", t);
        }
    }
}

#[test]
fn roots_match_companion_matrix() {
    for p in [
        ReservoirParams::new(1.0, 1.0, 0.01, 0.01).unwrap(),
        ReservoirParams::new(1.0, 1.0, 5.0, 0.01).unwrap(),
        ReservoirParams::new(0.3, 1.7, 2.0, 0.4).unwrap(),
    ] {
        let cubic = characteristic_cubic(&p);
        let [_, b2, b1, b0] = cubic.denominator;
        let companion = DMatrix::from_row_slice(3, 3, &[-b2, -b1, -b0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        let eig = companion.complex_eigenvalues();
        for r in &cubic.roots {
            let nearest = eig.iter().map(|e| (e - r).norm()).fold(f64::INFINITY, f64::min);
            assert!(nearest < 1e-9 * r.norm().max(1.0), "{p}: root {r} vs {eig}");
        }
    }
    let strong = characteristic_cubic(&ReservoirParams::new(1.0, 1.0, 0.01, 0.01).unwrap());
    let oscillating = strong.roots.iter().filter(|r| r.im.abs() > 0.05).count();
    assert_eq!(oscillating, 2);
}

#[test]
fn swap_symmetry_of_amplitude() {
    let p = ReservoirParams::new(0.4, 1.3, 0.7, 3.0).unwrap();
    let a = AmplitudeSolver::excited(&p, 30.0).unwrap();
    let b = AmplitudeSolver::excited(&p.swapped(), 30.0).unwrap();
    for k in 0..=60 {
        let t = 0.5 * k as f64;
        assert!((a.amplitude(t) - b.amplitude(t)).norm() < 1e-12);
    }
}

#[test]
fn degenerate_parameters_use_ode() {
    let p = ReservoirParams::new(0.25, 0.25, 1.0, 1.0).unwrap();
    let solver = AmplitudeSolver::excited(&p, 10.0).unwrap();
    assert!(!solver.is_residue());
    for t in [0.0, 0.3, 2.0, 7.5, 10.0] {
        let want = (-t / 2.0f64).exp() * (1.0 + t / 2.0);
        assert!((solver.amplitude(t).re - want).abs() < 1e-9);
    }
}

#[test]
fn grid_and_time_errors() {
    let p = ReservoirParams::default();
    assert!(matches!(amplitude_residue(-1.0, &p, one()), Err(Error::NegativeTime(_))));
    assert!(TimeGrid::new(vec![0.0, 1.0, 1.0]).is_err());
    assert!(TimeGrid::new(vec![0.5, 1.0]).is_err());
    assert!(ReservoirParams::new(1.0, 1.0, 0.0, 1.0).is_err());
    assert!(ReservoirParams::new(-1.0, 1.0, 1.0, 1.0).is_err());
    assert!(correlation_kernel(-0.1, &p).is_err());
}
