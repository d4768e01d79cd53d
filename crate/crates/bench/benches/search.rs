use criterion::{criterion_group, criterion_main, Criterion};
use ixcode_bench::workloads;
use ixcode_core::cellular::cellular_minsearch;
use ixcode_core::fitting::minrank_search;
use ixcode_core::oracle::{oracle_multisender, SearchBounds};
use ixcode_core::SearchConfig;

fn minrank(c: &mut Criterion) {
    let cfg = SearchConfig::default();
    let mut group = c.benchmark_group("minrank");
    for (name, inst) in workloads() {
        if minrank_search(&inst, &cfg).is_err() {
            continue;
        }
        group.bench_function(name, |b| b.iter(|| minrank_search(&inst, &cfg).unwrap().n_opt));
    }
    group.finish();
}

fn cellular(c: &mut Criterion) {
    let cfg = SearchConfig::default();
    let mut group = c.benchmark_group("cellular");
    for (name, inst) in workloads().into_iter().filter(|(_, i)| i.is_cellular()) {
        group.bench_function(name, |b| b.iter(|| cellular_minsearch(&inst, &cfg).unwrap().n_opt));
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let bounds = SearchBounds::default();
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    for (name, inst) in workloads().into_iter().filter(|(_, i)| i.n() <= 5) {
        group.bench_function(name, |b| b.iter(|| oracle_multisender(&inst, &bounds).unwrap().n_opt));
    }
    group.finish();
}

criterion_group!(benches, minrank, cellular, oracle);
criterion_main!(benches);
