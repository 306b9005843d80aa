use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;
use qbattery::basis::build_jch_sector;
use qbattery::battery::{Backend, EngineConfig};
use qbattery::dynamics::chebyshev::{ChebyshevPropagator, Workspace};
use qbattery::dynamics::diagonalize;
use qbattery::hamiltonians::{hamiltonian, initial_state, ModelBasis};
use qbattery::{quench_power, ModelParams, SearchConfig};

fn basis(c: &mut Criterion) {
    let mut g = c.benchmark_group("jch_sector");
    for n in [4usize, 6] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| build_jch_sector(black_box(n), 1).unwrap())
        });
    }
    g.finish();
}

fn eigensolver(c: &mut Criterion) {
    let p = ModelParams::jch(5, 1, 0.05, 0.5);
    let basis = ModelBasis::build(&p, 1 << 20).unwrap();
    let h = hamiltonian(&p, &basis).unwrap().to_dense();
    let mut g = c.benchmark_group("diagonalize");
    g.sample_size(10);
    g.bench_function("jch_n5_dim1002", |b| {
        b.iter(|| diagonalize(black_box(&h)).unwrap())
    });
    g.finish();
}

fn chebyshev(c: &mut Criterion) {
    let p = ModelParams::jch(6, 1, 0.05, 0.5);
    let basis = ModelBasis::build(&p, 1 << 20).unwrap();
    let prop = ChebyshevPropagator::new(hamiltonian(&p, &basis).unwrap());
    let psi0 = initial_state(&p, &basis)
        .unwrap()
        .into_iter()
        .map(|x| Complex64::new(x, 0.0))
        .collect::<Vec<_>>();
    let mut work = Workspace::default();
    c.bench_function("chebyshev_step_jch_n6", |b| {
        b.iter(|| {
            let mut psi = psi0.clone();
            prop.propagate(&mut psi, black_box(0.05), &mut work);
            psi
        })
    });
}

fn power(c: &mut Criterion) {
    let mut g = c.benchmark_group("quench_power");
    g.sample_size(10);
    for backend in [Backend::Dense, Backend::Chebyshev] {
        let engine = EngineConfig {
            backend,
            ..EngineConfig::default()
        };
        g.bench_function(format!("jch_n4_kappa0.5_{backend:?}"), |b| {
            b.iter(|| {
                let p = ModelParams::jch(4, 1, 0.05, 0.5);
                quench_power(&p, &SearchConfig::default(), &engine).unwrap()
            })
        });
    }
    g.bench_function("dicke_n10_beta0.5", |b| {
        b.iter(|| {
            let p = ModelParams::dicke(10, 1, 0.5);
            quench_power(&p, &SearchConfig::default(), &EngineConfig::default()).unwrap()
        })
    });
    g.finish();
}

criterion_group!(benches, basis, eigensolver, chebyshev, power);
criterion_main!(benches);
