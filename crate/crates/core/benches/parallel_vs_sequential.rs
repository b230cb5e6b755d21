use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use modcert_core::degree_general::{subcritical_constant_with, subcritical_empirical_with, DegreeProfile};
use modcert_core::parallel::Execution;
use modcert_core::phase_sim::simulate_trials;
use modcert_core::rng::trial_seeds;
use modcert_core::upper_bound::{certify_upper_with, Constants};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn series(c: &mut Criterion) {
    let profile: DegreeProfile = "1:0.6,2:0.2,3:0.2".parse().unwrap();
    let mut group = c.benchmark_group("subcritical_series");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, 120), |b| {
            b.iter(|| subcritical_constant_with(black_box(&profile), 120, exec).unwrap())
        });
    }
    group.finish();
}

fn empirical(c: &mut Criterion) {
    let profile: DegreeProfile = "1:0.6,2:0.2,3:0.2".parse().unwrap();
    let mut group = c.benchmark_group("subcritical_trials");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, 20_000), |b| {
            b.iter(|| subcritical_empirical_with(&profile, 20_000, 16, 7, exec).unwrap())
        });
    }
    group.finish();
}

fn phases(c: &mut Criterion) {
    let seeds = trial_seeds(1, 8);
    let mut group = c.benchmark_group("phase_trials");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, 20_000), |b| {
            b.iter(|| simulate_trials(20_000, 0.037562, &seeds, exec).unwrap())
        });
    }
    group.finish();
}

fn upper_grid(c: &mut Criterion) {
    let consts = Constants::default();
    let mut group = c.benchmark_group("upper_grid");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, "1e-4"), |b| {
            b.iter(|| certify_upper_with(&consts, 1e-4, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, series, empirical, phases, upper_grid);
criterion_main!(benches);
