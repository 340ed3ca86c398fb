use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use toric_lg::constructions::{catalog_poly, run_all};
use toric_lg::minkowski::find_presentation_with;
use toric_lg::period::period_sequence_with;
use toric_lg::polytope::newton_polytope;
use toric_lg::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn periods(c: &mut Criterion) {
    let mut group = c.benchmark_group("period_sequence");
    group.sample_size(10);
    for name in ["cubic3.f0", "cubic4.f00"] {
        let f = catalog_poly(name).unwrap();
        for (label, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(label, name), &f, |b, f| {
                b.iter(|| period_sequence_with(f, 8, exec, true).unwrap())
            });
        }
    }
    group.finish();
}

fn lattice_points(c: &mut Criterion) {
    let mut group = c.benchmark_group("lattice_points");
    let f = catalog_poly("cubic4.f00").unwrap().pow(3);
    let p = newton_polytope(&f).unwrap();
    for (label, exec) in MODES {
        group.bench_function(label, |b| b.iter(|| p.lattice_points_with(exec)));
    }
    group.finish();
}

fn presentations(c: &mut Criterion) {
    let mut group = c.benchmark_group("find_presentation");
    group.sample_size(10);
    let f = catalog_poly("cubic3.f0").unwrap();
    for (label, exec) in MODES {
        group.bench_function(label, |b| b.iter(|| find_presentation_with(&f, exec).unwrap()));
    }
    group.finish();
}

fn catalog(c: &mut Criterion) {
    let mut group = c.benchmark_group("catalog");
    group.sample_size(10);
    for (label, exec) in MODES {
        group.bench_function(label, |b| b.iter(|| run_all(exec)));
    }
    group.finish();
}

criterion_group!(benches, periods, lattice_points, presentations, catalog);
criterion_main!(benches);
