use std::sync::Arc;

use chipfire::verify::EnumerateOptions;
use chipfire::{
    build_graph, construct_bipartite_period, detect_period, detect_period_lowmem, enumerate_periods, Graph, GraphSpec,
    Stepper,
};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn graph(spec: &str) -> Graph {
    build_graph(&spec.parse::<GraphSpec>().unwrap()).unwrap()
}

fn step(c: &mut Criterion) {
    let mut group = c.benchmark_group("step");
    for spec in ["complete_bipartite:50,50", "complete:100", "cycle:100", "path:100"] {
        let g = graph(spec);
        let src: Vec<u64> = g.degrees().iter().enumerate().map(|(v, &d)| (v as u64 * 7) % (2 * d as u64)).collect();
        let mut dst = vec![0; src.len()];
        let mut stepper = Stepper::new(&g);
        group.bench_function(BenchmarkId::from_parameter(spec), |b| {
            b.iter(|| stepper.step(black_box(&src), &mut dst).unwrap())
        });
    }
    group.finish();
}

fn detection(c: &mut Criterion) {
    let mut group = c.benchmark_group("detect");
    for (a, b, p) in [(8, 8, 16), (20, 30, 40), (50, 50, 7)] {
        let start = construct_bipartite_period(a, b, p).unwrap();
        let id = format!("K{a},{b}/p{p}");
        group.bench_function(BenchmarkId::new("stored", &id), |bench| {
            bench.iter(|| detect_period(black_box(&start), 1_000_000).unwrap())
        });
        group.bench_function(BenchmarkId::new("lowmem", &id), |bench| {
            bench.iter(|| detect_period_lowmem(black_box(&start), 1_000_000).unwrap())
        });
    }
    group.finish();
}

fn exhaustive(c: &mut Criterion) {
    let g = Arc::new(graph("complete_bipartite:2,3"));
    let opts = EnumerateOptions::default();
    let mut group = c.benchmark_group("enumerate");
    group.sample_size(10);
    group.bench_function("exhaustive K2,3", |b| b.iter(|| enumerate_periods(&g, &opts).unwrap()));
    group.finish();
}

criterion_group!(benches, step, detection, exhaustive);
criterion_main!(benches);
