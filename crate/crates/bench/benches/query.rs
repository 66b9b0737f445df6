use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use twochild_bench::QUERIES;
use twochild_core::querylang::{evaluate, parse};

fn queries(c: &mut Criterion) {
    let mut g = c.benchmark_group("query");
    for (name, text) in QUERIES {
        g.bench_with_input(BenchmarkId::new("parse", name), text, |b, text| {
            b.iter(|| parse(black_box(text)).unwrap())
        });
        let q = parse(text).unwrap();
        g.bench_with_input(BenchmarkId::new("evaluate", name), &q, |b, q| {
            b.iter(|| evaluate(black_box(q), 5).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, queries);
criterion_main!(benches);
