use proptest::prelude::*;
use pseudomode_core::nonmarkov::evolved_pair;
use pseudomode_core::*;

#[test]
fn trace_distance_identity() {
    for p in [
        ReservoirParams::new(1.0, 1.0, 0.01, 0.01).unwrap(),
        ReservoirParams::new(1.0, 1.0, 5.0, 5.0).unwrap(),
        ReservoirParams::new(0.25, 0.25, 1.0, 1.0).unwrap(),
    ] {
        let solver = AmplitudeSolver::excited(&p, 100.0).unwrap();
        for k in 0..=400 {
            let t = 0.25 * k as f64;
            let (a, b) = evolved_pair(&solver, t).unwrap();
            let d = trace_distance(&a, &b).unwrap();
            assert!((d - solver.survival(t)).abs() < 1e-10, "{p} t={t}");
        }
    }
}

#[test]
fn regimes() {
    let weak = blp_measure(&ReservoirParams::new(1.0, 1.0, 5.0, 5.0).unwrap(), &BlpOptions::default()).unwrap();
    assert!(weak.n < 1e-3);
    let strong = blp_measure(&ReservoirParams::new(1.0, 1.0, 0.01, 0.01).unwrap(), &BlpOptions::default()).unwrap();
    assert!(strong.n > 0.1);
    assert!(strong.revival_intervals.len() > 1);
    assert!(!strong.horizon_exhausted);
    let none = blp_measure(&ReservoirParams::new(0.0, 0.0, 1.0, 1.0).unwrap(), &BlpOptions::default()).unwrap();
    assert_eq!(none.n, 0.0);
}

#[test]
fn grid_refinement_converges() {
    for p in [
        ReservoirParams::new(1.0, 1.0, 0.3, 0.3).unwrap(),
        ReservoirParams::new(1.0, 0.5, 0.05, 0.8).unwrap(),
    ] {
        let coarse = BlpOptions {
            points_per_unit: Some(200.0),
            ..Default::default()
        };
        let fine = BlpOptions {
            points_per_unit: Some(400.0),
            ..Default::default()
        };
        let a = blp_measure(&p, &coarse).unwrap();
        let b = blp_measure(&p, &fine).unwrap();
        assert!((a.n - b.n).abs() < 1e-6, "{} vs {}", a.n, b.n);
    }
}

#[test]
fn gamma_plane_regimes_at_unit_width() {
    let mut spec = ContourSpec::gamma_plane(1.0, (0.05, 1.0), 5).unwrap();
    spec.blp.horizon = 50.0;
    let map = contour_scan(&spec).unwrap();
    for (j, &g2) in map.axis2_values.iter().enumerate() {
        for (i, &g1) in map.axis1_values.iter().enumerate() {
            let n = map.get(i, j);
            if g1 <= 0.3 && g2 <= 0.3 {
                assert!(n < 1e-3, "({g1},{g2}) -> {n}");
            }
            if g1 >= 0.6 && g2 >= 0.6 {
                assert!(n > 1e-3, "({g1},{g2}) -> {n}");
            }
            assert!((n - map.get(j, i)).abs() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn swap_symmetry(g1 in 0.0..2.0f64, g2 in 0.0..2.0f64, l1 in 0.05..5.0f64, l2 in 0.05..5.0f64) {
        let p = ReservoirParams::new(g1, g2, l1, l2).unwrap();
        let opts = BlpOptions { horizon_cap: 2000.0, ..Default::default() };
        let a = blp_measure(&p, &opts).unwrap();
        let b = blp_measure(&p.swapped(), &opts).unwrap();
        prop_assert!((a.n - b.n).abs() < 1e-12, "{} vs {}", a.n, b.n);
        prop_assert!(a.n1 >= 0.0 && a.n == 2.0 * a.n1);
    }

    #[test]
    fn markovian_when_widths_dominate(g1 in 0.0..1.0f64, g2 in 0.0..1.0f64, f1 in 1.0..5.0f64, f2 in 1.0..5.0f64) {
        let total = g1 + g2;
        prop_assume!(total > 1e-3);
        let p = ReservoirParams::new(g1, g2, 2.0 * total * f1, 2.0 * total * f2).unwrap();
        let r = blp_measure(&p, &BlpOptions::default()).unwrap();
        prop_assert!(r.n < 1e-3, "{} -> {}", p, r.n);
    }
}
