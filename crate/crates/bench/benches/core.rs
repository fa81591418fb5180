use bdris_core::adversarial::in_a;
use bdris_core::architecture::{theta_from_susceptance, ArchitectureSpec, SusceptanceMatrix};
use bdris_core::channel;
use bdris_core::experiment::run_experiment;
use bdris_core::optimize::{optimize, optimize_tc};
use bdris_core::{ExperimentConfig, Scenario, SimRng, DEFAULT_MEMBERSHIP_TOL, DEFAULT_RANK_RTOL};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

const SIZES: [usize; 3] = [16, 32, 64];

fn optimizers(c: &mut Criterion) {
    let mut group = c.benchmark_group("optimize");
    for n in SIZES {
        let pair = channel::gen_rayleigh(n, &mut SimRng::seed_from_u64(1)).unwrap();
        group.bench_with_input(BenchmarkId::new("tc", n), &pair, |b, p| {
            b.iter(|| optimize_tc(black_box(p), 50.0, DEFAULT_RANK_RTOL).unwrap())
        });
        let gc4 = ArchitectureSpec::uniform_groups(n, 4).unwrap();
        group.bench_with_input(BenchmarkId::new("gc:4", n), &pair, |b, p| {
            b.iter(|| optimize(black_box(p), &gc4, 50.0, DEFAULT_RANK_RTOL).unwrap())
        });
        let sc = ArchitectureSpec::single_connected(n).unwrap();
        group.bench_with_input(BenchmarkId::new("sc", n), &pair, |b, p| {
            b.iter(|| optimize(black_box(p), &sc, 50.0, DEFAULT_RANK_RTOL).unwrap())
        });
    }
    group.finish();
}

fn cayley(c: &mut Criterion) {
    let mut group = c.benchmark_group("theta_from_susceptance");
    for n in SIZES {
        let arch = ArchitectureSpec::fully_connected(n).unwrap();
        let mut rng = SimRng::seed_from_u64(2);
        let mut b = SusceptanceMatrix::zeros(arch.pattern(), n);
        for (i, j) in arch.pattern().free_entries(n) {
            b.set(i, j, rng.uniform(-0.1, 0.1)).unwrap();
        }
        group.bench_with_input(BenchmarkId::from_parameter(n), &b, |bench, m| {
            bench.iter(|| theta_from_susceptance(black_box(m), 50.0).unwrap())
        });
    }
    group.finish();
}

fn membership(c: &mut Criterion) {
    let mut group = c.benchmark_group("in_a");
    for n in SIZES {
        let pair = channel::gen_tc_adversarial(n, None, &mut SimRng::seed_from_u64(3)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &pair, |b, p| {
            b.iter(|| in_a(black_box(p), DEFAULT_MEMBERSHIP_TOL))
        });
    }
    group.finish();
}

fn experiment(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_experiment");
    group.sample_size(10);
    let mut config = ExperimentConfig::new(Scenario::Rayleigh);
    config.sizes = vec![32];
    config.trials = 100;
    group.bench_function("rayleigh n=32 x100, sc gc:2 gc:4 tc", |b| {
        b.iter(|| run_experiment(black_box(&config)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, optimizers, cayley, membership, experiment);
criterion_main!(benches);
