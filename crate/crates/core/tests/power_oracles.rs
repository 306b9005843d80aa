mod common;

use common::tan_root;
use qbattery::battery::{energy_series, max_power, rabi_oracle, FnTrace, Notice};
use qbattery::{
    quench_power, CounterRotating, EngineConfig, ModelParams, RabiParams, SearchConfig,
};

fn search(t_max: f64) -> SearchConfig {
    SearchConfig {
        t_max: Some(t_max),
        ..SearchConfig::default()
    }
}

#[test]
fn tan_root_matches_a_fine_scan_of_the_quotient() {
    let x_star = tan_root();
    assert!((x_star.tan() - 2.0 * x_star).abs() < 1e-9);
    let n = 1_000_000;
    let (mut best_x, mut best_q) = (0.0, f64::NEG_INFINITY);
    for k in 1..=n {
        let x = std::f64::consts::PI * k as f64 / n as f64;
        let q = x.sin().powi(2) / x;
        if q > best_q {
            best_q = q;
            best_x = x;
        }
    }
    assert!(
        (best_x - x_star).abs() < 1e-5,
        "scan {best_x}, bisection {x_star}"
    );
}

#[test]
fn refined_maximum_beats_the_grid_and_agrees_with_a_denser_scan() {
    for (omega, samples) in [(0.05, 4096), (0.3, 512), (1.7, 300)] {
        let t_max = 10.0 * std::f64::consts::PI / omega;
        let f = |t: f64| (omega * t).sin().powi(2);
        let cfg = SearchConfig {
            n_samples: samples,
            ..search(t_max)
        };
        let r = max_power(&mut FnTrace::with_bound(f, 1.0), &cfg).unwrap();
        assert!(r.p_max >= r.grid_p_max);
        assert!(r.notice.is_none());

        let dense = samples * 100;
        let scan = (1..=dense)
            .map(|k| {
                let t = t_max * k as f64 / dense as f64;
                f(t) / t
            })
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(
            r.p_max >= scan * (1.0 - 1e-12),
            "refined {} below dense scan {scan}",
            r.p_max
        );
        assert!((r.p_max - scan).abs() / scan < cfg.rel_tol);
    }
}

#[test]
fn quench_tau_solves_the_transcendental_condition() {
    let x_star = tan_root();
    for m in 1..=3 {
        let p = ModelParams::jch(1, m, 0.05, 0.0);
        let r = quench_power(&p, &SearchConfig::default(), &EngineConfig::default()).unwrap();
        let omega = (m as f64).sqrt() * 0.05;
        let tau = r.power.tau.unwrap();
        assert!(
            ((omega * tau) - x_star).abs() / x_star < 1e-6,
            "m={m}: Omega tau = {}",
            omega * tau
        );
        let want = omega * x_star.sin().powi(2) / x_star;
        assert!((r.power.p_max - want).abs() / want < 1e-10);
    }
}

#[test]
fn rabi_oracle_time_of_peak_energy() {
    let (omega, tau) = rabi_oracle(&RabiParams::new(0.3, 0.2, 2)).unwrap();
    let want = (0.09f64 + 4.0 * 2.0 * 0.04).sqrt() / 2.0;
    assert!((omega - want).abs() < 1e-15);
    assert!((tau - std::f64::consts::PI / (2.0 * want)).abs() < 1e-12);
}

#[test]
fn single_cavity_energy_is_a_squared_sine() {
    let grid = (1..=1000).map(|k| k as f64 * 0.1).collect::<Vec<_>>();
    for (t, e) in energy_series(&ModelParams::jch(1, 1, 0.05, 0.0), &grid).unwrap() {
        assert!((e - (0.05 * t).sin().powi(2)).abs() < 1e-12);
    }
}

#[test]
fn uncoupled_power_is_extensive() {
    let one = quench_power(
        &ModelParams::jch(1, 2, 0.05, 0.0),
        &SearchConfig::default(),
        &EngineConfig::default(),
    )
    .unwrap()
    .power
    .p_max;
    for n in 2..=4 {
        let many = quench_power(
            &ModelParams::jch(n, 2, 0.05, 0.0),
            &SearchConfig::default(),
            &EngineConfig::default(),
        )
        .unwrap()
        .power
        .p_max;
        assert!((many / (n as f64 * one) - 1.0).abs() < 1e-8, "N={n}");
    }
}

#[test]
fn zero_coupling_is_a_flat_signal() {
    let jch = quench_power(
        &ModelParams::jch(3, 1, 0.0, 0.5),
        &SearchConfig::default(),
        &EngineConfig::default(),
    )
    .unwrap();
    assert_eq!(jch.power.notice, Some(Notice::FlatSignal));
    assert_eq!(jch.power.p_max, 0.0);
    assert!(jch.power.tau.is_none());

    let dicke = ModelParams::dicke(4, 1, 0.0).with_beta_prime(CounterRotating::Value(0.0));
    let r = quench_power(&dicke, &SearchConfig::default(), &EngineConfig::default()).unwrap();
    assert_eq!(r.power.notice, Some(Notice::FlatSignal));
}

#[test]
fn early_stop_does_not_change_the_answer() {
    let p = ModelParams::jch(3, 1, 0.05, 0.5);
    let fast = quench_power(&p, &SearchConfig::default(), &EngineConfig::default()).unwrap();
    let full = quench_power(
        &p,
        &SearchConfig {
            early_stop: false,
            ..SearchConfig::default()
        },
        &EngineConfig::default(),
    )
    .unwrap();
    assert_eq!(fast.power.p_max.to_bits(), full.power.p_max.to_bits());
    assert_eq!(fast.power.tau, full.power.tau);
    assert!(fast.power.series.len() <= full.power.series.len());
}
