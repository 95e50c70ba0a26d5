use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use synchro_bench::{alignment_pair, permutation, segment};
use synchro_core::align::greedy_align;
use synchro_core::eval::aer;
use synchro_core::metrics::spearman_rho;
use synchro_core::{score_segment, MetricConfig};

fn greedy(c: &mut Criterion) {
    let mut group = c.benchmark_group("greedy_align");
    for words in [10, 40, 100] {
        let (seg, emb) = segment(words, 768, 1);
        group.bench_with_input(BenchmarkId::from_parameter(words), &words, |b, _| {
            b.iter(|| greedy_align(black_box(&emb.source), black_box(&emb.target), &seg).unwrap())
        });
    }
    group.finish();
}

fn scoring(c: &mut Criterion) {
    let (seg, emb) = segment(40, 768, 2);
    let cfg = MetricConfig::default();
    c.bench_function("score_segment/40", |b| {
        b.iter(|| score_segment(black_box(&seg), Some(&emb), None, &cfg).unwrap())
    });
}

fn spearman(c: &mut Criterion) {
    let mut group = c.benchmark_group("spearman_rho");
    for k in [10, 100, 1000] {
        let perm = permutation(k, 3);
        group.bench_with_input(BenchmarkId::from_parameter(k), &perm, |b, perm| {
            b.iter(|| spearman_rho(black_box(perm)).unwrap())
        });
    }
    group.finish();
}

fn alignment_error(c: &mut Criterion) {
    let (pred, gold) = alignment_pair(60, 4);
    c.bench_function("aer/60x60", |b| {
        b.iter(|| aer(black_box(&pred), black_box(&gold)).unwrap())
    });
}

criterion_group!(benches, greedy, scoring, spearman, alignment_error);
criterion_main!(benches);
