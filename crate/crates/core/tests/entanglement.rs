use nalgebra::{Matrix2, Matrix4};
use proptest::prelude::*;
use pseudomode_core::quantifiers::eur_lhs_matrix;
use pseudomode_core::*;

fn kron2(a: &Matrix2<Complex64>, b: &Matrix2<Complex64>) -> Matrix4<Complex64> {
    Matrix4::from_fn(|i, j| a[(i / 2, j / 2)] * b[(i % 2, j % 2)])
}

fn to_dyn(m: &Matrix4<Complex64>) -> linalg::CMatrix {
    linalg::CMatrix::from_iterator(4, 4, m.iter().copied())
}

/// Amplitude-damping Kraus pair in the `|e⟩, |g⟩` basis.
fn damping_kraus(m1: Complex64) -> [Matrix2<Complex64>; 2] {
    let z = Complex64::new(0.0, 0.0);
    let o = Complex64::new(1.0, 0.0);
    let leak = Complex64::new((1.0 - m1.norm_sqr()).max(0.0).sqrt(), 0.0);
    [Matrix2::new(m1, z, z, o), Matrix2::new(z, z, leak, z)]
}

#[test]
fn factorized_channel_reproduces_x_state() {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let z = Complex64::new(0.0, 0.0);
    let psi = nalgebra::Vector4::new(z, h, h, z);
    let bell = psi * psi.adjoint();
    for k in 0..50 {
        let s = k as f64 / 49.0;
        // An arbitrary phase on M₁ must not matter.
        let m1 = Complex64::from_polar(s.sqrt(), 0.37 * k as f64);
        let kraus = damping_kraus(m1);
        let mut out = Matrix4::<Complex64>::zeros();
        for a in &kraus {
            for b in &kraus {
                let k = kron2(a, b);
                out += k * bell * k.adjoint();
            }
        }
        let x = bell_xstate(s).unwrap().to_matrix();
        assert!((out - x).norm() < 1e-12, "s={s}");
        assert!(bell_xstate(s).unwrap().validate().is_ok());
    }
}

#[test]
fn concurrence_routes_agree() {
    for k in 0..=100 {
        let s = k as f64 / 100.0;
        let x = bell_xstate(s).unwrap();
        let w = concurrence_wootters(&x.to_matrix()).unwrap();
        assert!((w - s).abs() < 1e-10, "s={s} wootters={w}");
        assert!((concurrence_x(&x) - s).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn berta_inequality(s in 0.0..=1.0f64) {
        let x = bell_xstate(s).unwrap();
        prop_assert!(eur_lhs(&x) >= leu(s).unwrap() - 1e-9);
    }

    #[test]
    fn leu_matches_conditional_entropy(s in 0.0..=1.0f64) {
        let x = bell_xstate(s).unwrap();
        let rho = to_dyn(&x.to_matrix());
        let cond = quantifiers::conditional_entropy(&rho).unwrap();
        prop_assert!((leu(s).unwrap() - (1.0 + cond)).abs() < 1e-10);
    }

    #[test]
    fn wootters_on_random_x_states(a in 0.0..1.0f64, b in 0.0..1.0f64, c in 0.0..1.0f64, d in 0.0..1.0f64, phase in 0.0..6.3f64, frac in 0.0..1.0f64) {
        let total = a + b + c + d;
        prop_assume!(total > 1e-3);
        let (r11, r22, r33, r44) = (a / total, b / total, c / total, d / total);
        let x = XStateDensity {
            rho11: r11,
            rho22: r22,
            rho33: r33,
            rho44: r44,
            rho23: Complex64::from_polar(frac * (r22 * r33).sqrt(), phase),
        };
        let w = concurrence_wootters(&x.to_matrix()).unwrap();
        prop_assert!((w - concurrence_x(&x)).abs() < 1e-10);
        prop_assert!(eur_lhs_matrix(&to_dyn(&x.to_matrix())).unwrap() >= 1.0 + quantifiers::conditional_entropy(&to_dyn(&x.to_matrix())).unwrap() - 1e-9);
    }
}

#[test]
fn eur_lhs_reference_states() {
    assert!(eur_lhs(&bell_xstate(1.0).unwrap()).abs() < 1e-12);
    assert!((eur_lhs(&bell_xstate(0.0).unwrap()) - 2.0).abs() < 1e-12);
}

#[test]
fn leu_shape() {
    assert_eq!(leu(0.0).unwrap(), 1.0);
    assert_eq!(leu(1.0).unwrap(), 0.0);
    assert!(leu(1.5).is_err());
    assert!(leu(-0.01).is_err());
    let samples: Vec<f64> = (0..=10_000).map(|k| leu(k as f64 / 10_000.0).unwrap()).collect();
    let diffs: Vec<f64> = samples.windows(2).map(|w| w[1] - w[0]).collect();
    let sign_changes = diffs.windows(2).filter(|w| (w[0] > 0.0) != (w[1] > 0.0)).count();
    assert_eq!(sign_changes, 1);
    let c_star = witness_threshold();
    assert!((c_star - 0.66).abs() <= 0.01);
    assert!((leu(c_star).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn entropy_values() {
    let m = linalg::CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        Complex64::new(0.25, 0.0),
        Complex64::new(0.75, 0.0),
    ]));
    assert!((von_neumann_entropy(&m).unwrap() - 0.811_278_124_459_132_8).abs() < 1e-12);
}

#[test]
fn witness_iff_above_threshold() {
    let c_star = witness_threshold();
    for (l1, l2, horizon) in [(5.0, 5.0, 3.0), (5.0, 0.01, 3.0), (0.01, 0.01, 60.0)] {
        let p = ReservoirParams::new(1.0, 1.0, l1, l2).unwrap();
        let trace = witness_trace(&p, &TimeGrid::default_for(&p, horizon).unwrap()).unwrap();
        for (k, &t) in trace.times.iter().enumerate() {
            let c = trace.concurrence[k];
            if (c - c_star).abs() < 1e-9 {
                continue;
            }
            let inside = trace.windows.iter().any(|w| w.t_start <= t && t <= w.t_end);
            assert_eq!(inside, c > c_star, "t={t} c={c}");
            assert_eq!(trace.leu[k] < 1.0, c > c_star);
            assert!(trace.eur_lhs[k] >= trace.leu[k] - 1e-9);
        }
        for pair in trace.windows.windows(2) {
            assert!(pair[0].t_end < pair[1].t_start);
        }
    }
}

#[test]
fn window_boundaries_hit_threshold() {
    let p = ReservoirParams::new(1.0, 1.0, 0.01, 0.01).unwrap();
    let trace = witness_trace(&p, &TimeGrid::default_for(&p, 60.0).unwrap()).unwrap();
    let solver = AmplitudeSolver::excited(&p, 60.0).unwrap();
    let c_star = witness_threshold();
    assert!(trace.windows.len() >= 2);
    for w in &trace.windows {
        for t in [w.t_start, w.t_end] {
            if t > 0.0 && t < 60.0 {
                assert!((solver.survival(t) - c_star).abs() < 1e-6, "t={t}");
            }
        }
    }
}
