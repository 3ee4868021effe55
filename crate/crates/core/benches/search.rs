use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ryserlab::feasibility::{scan_report, ParameterTuple};
use ryserlab::search::{search_designs, SearchSpec};
use ryserlab::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("scan_2_8");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| scan_report(black_box(2), black_box(8), false, exec).unwrap())
        });
    }
    group.finish();
}

fn search(c: &mut Criterion) {
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    let tuples = [
        ("v7", ParameterTuple::from_core(2, 2, 1, 2)),
        ("v11", ParameterTuple::from_core(3, 3, 2, 2)),
        ("v13", ParameterTuple::from_core(3, 2, 1, 4)),
    ];
    for (label, t) in tuples {
        let spec = SearchSpec::new(t.expect("tuple exists"));
        for (name, exec) in MODES {
            group.bench_function(BenchmarkId::new(label, name), |b| {
                b.iter(|| search_designs(black_box(&spec), exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, scan, search);
criterion_main!(benches);
