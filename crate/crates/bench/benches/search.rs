use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use diffavoid::{max_avoiding_set, paley_clique_number, Prime, SearchLimits};
use diffavoid_bench::residue_graph;

fn bench_paley(c: &mut Criterion) {
    let mut group = c.benchmark_group("paley_clique_number");
    for p in [29u64, 61, 101] {
        let prime = Prime::new(p).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(p), &prime, |b, &prime| {
            b.iter(|| paley_clique_number(prime, &SearchLimits::unlimited()).unwrap())
        });
    }
    group.finish();
}

fn bench_box_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("max_avoiding_set");
    group.sample_size(10);
    for (p, n, k) in [(11u64, 2usize, 2u64), (13, 2, 3), (5, 3, 2)] {
        let g = residue_graph(p, n, k);
        group.bench_function(format!("p{p}_n{n}_k{k}"), |b| {
            b.iter(|| max_avoiding_set(&g, &SearchLimits::unlimited()))
        });
    }
    group.finish();
}

fn bench_build_graph(c: &mut Criterion) {
    c.bench_function("build_graph p7 n4 k3", |b| {
        b.iter(|| residue_graph(7, 4, 3))
    });
}

criterion_group!(benches, bench_paley, bench_box_search, bench_build_graph);
criterion_main!(benches);
