use proptest::prelude::*;
use qbattery::sweeps::{convergence_check, run_sweep, DEFAULT_CUTOFF_TOL};
use qbattery::{
    Axis, CounterRotating, EngineConfig, ModelParams, Normalization, Scaling, SearchConfig,
    SweepOptions, SweepRow, SweepSpec,
};

fn options(jobs: usize) -> SweepOptions {
    SweepOptions {
        jobs,
        ..SweepOptions::default()
    }
}

fn same_bits(a: &SweepRow, b: &SweepRow) -> bool {
    a.label == b.label
        && a.axis_value.to_bits() == b.axis_value.to_bits()
        && a.params == b.params
        && a.dim == b.dim
        && a.p_max.to_bits() == b.p_max.to_bits()
        && a.tau.map(f64::to_bits) == b.tau.map(f64::to_bits)
        && a.e_max.to_bits() == b.e_max.to_bits()
        && a.p_scaled.to_bits() == b.p_scaled.to_bits()
        && a.cutoff_converged == b.cutoff_converged
        && a.error == b.error
}

#[test]
fn worker_count_does_not_change_rows() {
    let jch = SweepSpec::new(
        "jch",
        ModelParams::jch(1, 1, 0.05, 0.5),
        Axis::N,
        vec![1.0, 2.0, 3.0, 4.0],
    )
    .with_scaling(Scaling::PerN);
    let dicke = SweepSpec::new(
        "dicke",
        ModelParams::dicke(2, 1, 0.5),
        Axis::N,
        vec![2.0, 3.0, 4.0, 5.0],
    )
    .with_scaling(Scaling::PerN);
    for spec in [jch, dicke] {
        let serial = run_sweep(&spec, &options(1)).unwrap();
        let parallel = run_sweep(&spec, &options(4)).unwrap();
        assert_eq!(serial.len(), parallel.len());
        for (a, b) in serial.iter().zip(&parallel) {
            assert!(same_bits(a, b), "{a:?} != {b:?}");
        }
    }
}

#[test]
fn uncoupled_chain_power_per_cavity_is_flat() {
    let spec = SweepSpec::new(
        "flat",
        ModelParams::jch(1, 1, 0.05, 0.0),
        Axis::N,
        vec![1.0, 2.0, 3.0, 4.0, 5.0],
    )
    .with_scaling(Scaling::PerN);
    let rows = run_sweep(&spec, &options(0)).unwrap();
    let first = rows[0].p_scaled;
    for r in &rows {
        assert!(
            (r.p_scaled / first - 1.0).abs() < 1e-8,
            "N={}: {}",
            r.axis_value,
            r.p_scaled
        );
    }
}

#[test]
fn failed_points_are_reported_not_fatal() {
    let engine = EngineConfig {
        capacity: 30,
        ..EngineConfig::default()
    };
    let opts = SweepOptions {
        engine,
        ..options(1)
    };
    let spec = SweepSpec::new(
        "cap",
        ModelParams::jch(1, 1, 0.05, 0.1),
        Axis::N,
        vec![1.0, 2.0, 3.0],
    );
    let rows = run_sweep(&spec, &opts).unwrap();
    assert!(rows[0].is_ok() && rows[1].is_ok());
    assert!(!rows[2].is_ok());
    assert!(rows[2].error.as_deref().unwrap().contains("capacity"));
}

#[test]
fn uncoupled_dicke_is_trivially_converged() {
    let p = ModelParams::dicke(4, 1, 0.0).with_beta_prime(CounterRotating::Value(0.0));
    let report = convergence_check(
        &p,
        &[4, 5],
        DEFAULT_CUTOFF_TOL,
        &SearchConfig::default(),
        &EngineConfig::default(),
    )
    .unwrap();
    assert!(report.converged);
    assert_eq!(report.max_rel_diff, 0.0);
}

#[test]
fn dicke_sweep_marks_cutoff_convergence() {
    let spec = SweepSpec::new(
        "conv",
        ModelParams::dicke(4, 1, 0.5),
        Axis::N,
        vec![4.0, 6.0],
    );
    let rows = run_sweep(&spec, &options(0)).unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.cutoff_converged == Some(true)));
}

fn scaling() -> impl Strategy<Value = Scaling> {
    prop_oneof![
        Just(Scaling::None),
        Just(Scaling::PerN),
        Just(Scaling::PerSqrtM),
        Just(Scaling::TimesKappa),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn scaled_power_times_factor_recovers_power(
        scaling in scaling(),
        n in 1usize..=3,
        m in 1usize..=2,
        kappa in 0.01f64..1.0,
    ) {
        let spec = SweepSpec::new("p", ModelParams::jch(n, m, 0.05, kappa), Axis::Kappa, vec![kappa])
            .with_scaling(scaling);
        let opts = SweepOptions {
            search: SearchConfig { n_samples: 512, ..SearchConfig::default() },
            ..options(1)
        };
        for r in run_sweep(&spec, &opts).unwrap() {
            let back = r.p_scaled * scaling.factor(&r.params);
            prop_assert!((back - r.p_max).abs() <= 1e-15 * r.p_max.abs().max(1e-300));
        }
    }

    #[test]
    fn normalization_only_rescales_couplings(n in 1usize..=6, beta in 0.05f64..1.0) {
        let bare = ModelParams::dicke(n, 1, beta).with_normalization(Normalization::None).with_n_max(4 * n);
        let scaled = ModelParams::dicke(n, 1, beta * (n as f64).sqrt()).with_n_max(4 * n);
        let search = SearchConfig { n_samples: 256, t_max: Some(20.0), ..SearchConfig::default() };
        let a = qbattery::quench_power(&bare, &search, &EngineConfig::default()).unwrap();
        let b = qbattery::quench_power(&scaled, &search, &EngineConfig::default()).unwrap();
        prop_assert!((a.power.p_max - b.power.p_max).abs() <= 1e-9 * a.power.p_max.abs().max(1e-12));
    }
}
