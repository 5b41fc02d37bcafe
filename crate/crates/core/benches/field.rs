use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use polyspectra_core::faultlines::{build_surface_map, fault_scan_with, halton_probes};
use polyspectra_core::pseudospectrum::{compute_field_with, GridSpec};
use polyspectra_core::{Execution, MatrixPolynomial, WeightPolynomial};

fn damped_system() -> MatrixPolynomial {
    MatrixPolynomial::from_real_rows(&[
        vec![vec![2.0, -1.0, 0.0], vec![-1.0, 3.0, 0.0], vec![0.0, 0.0, 10.0]],
        vec![vec![0.0, 0.0, 0.0], vec![0.0, 3.0, -1.0], vec![0.0, -1.0, 6.0]],
        vec![vec![1.0, 0.0, 0.0], vec![0.0, 2.0, 0.0], vec![0.0, 0.0, 5.0]],
    ])
    .unwrap()
}

fn modes() -> [(&'static str, Execution); 2] {
    [("parallel", Execution::Parallel), ("sequential", Execution::Sequential)]
}

fn field(c: &mut Criterion) {
    let p = damped_system();
    let w = WeightPolynomial::new(vec![10.0, 6.3, 5.0]).unwrap();
    let mut group = c.benchmark_group("compute_field");
    group.sample_size(10);
    for n in [101, 201] {
        let grid = GridSpec::new(-2.0, 1.0, -2.5, 2.5, n, n).unwrap();
        for (name, exec) in modes() {
            group.bench_with_input(BenchmarkId::new(name, n), &grid, |b, &grid| {
                b.iter(|| compute_field_with(black_box(&p), &w, grid, exec))
            });
        }
    }
    group.finish();
}

fn faults(c: &mut Criterion) {
    let p = damped_system();
    let grid = GridSpec::new(-2.0, 1.0, -2.5, 2.5, 121, 121).unwrap();
    let map = build_surface_map(&p, &halton_probes(&grid, 32)).unwrap();
    let mut group = c.benchmark_group("fault_scan");
    group.sample_size(10);
    for (name, exec) in modes() {
        group.bench_function(name, |b| b.iter(|| fault_scan_with(black_box(&p), &grid, &map, exec)));
    }
    group.finish();
}

criterion_group!(benches, field, faults);
criterion_main!(benches);
