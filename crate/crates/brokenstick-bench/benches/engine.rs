//! Throughput of the main computational routes: integer recursions, exact
//! rationals, the log-domain float path, simulation, and brute force.

use brokenstick::{
    beta_backward, beta_forward, count_bad_subsets, estimate_probability, prob_none_exact,
    prob_none_float, prob_not_all_exact, reconcile_report, Event,
};
use brokenstick_bench::fixed_sample;
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn recursions(c: &mut Criterion) {
    c.bench_function("beta_backward k3 n300", |b| {
        b.iter(|| beta_backward(black_box(3), black_box(300)).unwrap())
    });
    c.bench_function("beta_forward k3 n300", |b| {
        b.iter(|| beta_forward(black_box(3), black_box(300)).unwrap())
    });
    c.bench_function("reconcile_report k8 n120", |b| {
        b.iter(|| reconcile_report(black_box(8), black_box(120)).unwrap())
    });
}

fn exact_probabilities(c: &mut Criterion) {
    c.bench_function("prob_none_exact k5 n40", |b| {
        b.iter(|| prob_none_exact(black_box(5), black_box(40)).unwrap())
    });
    c.bench_function("prob_not_all_exact k6 n30", |b| {
        b.iter(|| prob_not_all_exact(black_box(6), black_box(30)).unwrap())
    });
    c.bench_function("prob_none_float k196 n200", |b| {
        b.iter(|| prob_none_float(black_box(196), black_box(200)).unwrap())
    });
}

fn sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("sampling");
    group.sample_size(20);
    group.bench_function("estimate none k3 n10 10k trials", |b| {
        b.iter(|| estimate_probability(Event::None, 3, 10, 10_000, 42, 4).unwrap())
    });
    let sample = fixed_sample(12, 42);
    group.bench_function("count_bad_subsets k3 n12", |b| {
        b.iter(|| count_bad_subsets(black_box(&sample), black_box(3)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, recursions, exact_probabilities, sampling);
criterion_main!(benches);
