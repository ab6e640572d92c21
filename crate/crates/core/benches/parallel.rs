use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use frevival::constructions::{builders, hadamard_polygamy, verify_predictions};
use frevival::partition::oracle::brute_force_min_partition;
use frevival::report::{sweep, time_grid, Tolerances};
use frevival::spectral::{spectral_decomposition, subset_projector};
use frevival::Execution;
use std::hint::black_box;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn time_sweep(c: &mut Criterion) {
    let g = builders::hypercube(6).unwrap();
    let grid = time_grid(0.0, 20.0, 2000);
    let tols = Tolerances::default();
    let mut group = c.benchmark_group("sweep_q6_2000");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| sweep(black_box(&g), 0, &grid, 0.99, &tols, exec).unwrap())
        });
    }
    group.finish();
}

fn partition_oracle(c: &mut Criterion) {
    // Eight distinct eigenvalues: 4140 candidate partitions.
    let g = builders::path(8).unwrap();
    let s = spectral_decomposition(&g, None).unwrap();
    let k = subset_projector(&[0, 7], 8).unwrap();
    let mut group = c.benchmark_group("oracle_p8");
    group.sample_size(20);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| brute_force_min_partition(black_box(&s), &k, 1e-7, exec))
        });
    }
    group.finish();
}

fn prediction_scan(c: &mut Criterion) {
    // Order 8 is the largest whose prime product stays below 2^53.
    let pg = hadamard_polygamy(3, &[3, 5, 7, 11, 13, 17, 19], false).unwrap();
    let mut group = c.benchmark_group("polygamy_predictions");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| verify_predictions(black_box(&pg.graph), &pg.predictions, 1e-8, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, time_sweep, partition_oracle, prediction_scan);
criterion_main!(benches);
