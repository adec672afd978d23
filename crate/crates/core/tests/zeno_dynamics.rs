use pseudomode_core::*;

fn strong() -> ReservoirParams {
    ReservoirParams::new(1.0, 1.0, 0.01, 0.01).unwrap()
}

#[test]
fn log_linear_in_measurement_count() {
    let p = strong();
    let s = ZenoSchedule::new(0.3, 300.0, &p).unwrap();
    let slope = -s.effective_rate().rate * s.interval();
    for n in [1u64, 2, 5, 17, 100, 999] {
        let c = zeno_concurrence(n as f64 * 0.3, &s, &p).unwrap();
        assert!((c.ln() - slope * n as f64).abs() < 1e-12 * (1.0 + (slope * n as f64).abs()), "n={n}");
        assert_eq!(c, s.lattice_survival(n));
    }
}

#[test]
fn zeno_regime_rate_increases_with_interval() {
    let p = strong();
    let rates: Vec<f64> = [0.005, 0.01, 0.02, 0.05]
        .iter()
        .map(|&t| effective_decay_rate(t, &p).unwrap().rate)
        .collect();
    assert!(rates.windows(2).all(|w| w[1] > w[0]), "{rates:?}");
}

#[test]
fn zeno_anti_zeno_crossover_is_bracketed() {
    let p = strong();
    let reference = asymptotic_decay_rate(&p).unwrap();
    let below = effective_decay_rate(0.01, &p).unwrap().rate;
    let above = effective_decay_rate(10.0, &p).unwrap().rate;
    assert!(below < reference && above > reference, "{below} {reference} {above}");
    let crossing = roots::bisect(
        |t| effective_decay_rate(t, &p).unwrap().rate - reference,
        0.01,
        10.0,
        1e-8,
    )
    .unwrap();
    assert!(crossing > 0.01 && crossing < 10.0);
}

#[test]
fn markov_limit_rate() {
    let p = ReservoirParams::new(1.0, 0.0, 200.0, 1.0).unwrap();
    let r = effective_decay_rate(2.0, &p).unwrap();
    assert!((r.rate - 1.0).abs() < 0.01, "{}", r.rate);
}

#[test]
fn small_interval_limit() {
    let p = strong();
    let rates: Vec<f64> = [1e-2, 1e-3, 1e-4].iter().map(|&t| effective_decay_rate(t, &p).unwrap().rate).collect();
    assert!(rates[2] < rates[1] && rates[1] < rates[0]);
    assert!(rates[2] < 1e-4);
}

#[test]
fn anti_zeno_schedule_is_never_witnessed() {
    let p = strong();
    let s = ZenoSchedule::new(10.0, 100.0, &p).unwrap();
    let grid = TimeGrid::uniform(100.0, 1001).unwrap();
    let trace = zeno_witness_trace(&MeasurementProtocol::Stroboscopic(s), &p, &grid).unwrap();
    assert!(trace.windows.is_empty());
    let unmeasured = asymptotic_decay_rate(&p).unwrap();
    assert!(s.effective_rate().rate > unmeasured);
}

#[test]
fn frequent_measurements_extend_witnessing() {
    let p = strong();
    let s = ZenoSchedule::new(0.01, 5000.0, &p).unwrap();
    let grid = TimeGrid::uniform(5000.0, 5001).unwrap();
    let trace = zeno_witness_trace(&MeasurementProtocol::Stroboscopic(s), &p, &grid).unwrap();
    assert_eq!(trace.windows.len(), 1);
    let end = trace.windows[0].t_end;
    // The window closes where P(T)^N crosses the threshold.
    let n_star = witness_threshold().ln() / s.survival_at_interval().ln();
    assert!((end - n_star * 0.01).abs() < 0.01, "{end} vs {}", n_star * 0.01);
    let unmeasured = witness_trace(&p, &TimeGrid::default_for(&p, 60.0).unwrap()).unwrap();
    assert!(end > 100.0 * unmeasured.first_window_end().unwrap());
}
