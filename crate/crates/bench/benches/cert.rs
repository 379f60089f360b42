use criterion::{criterion_group, criterion_main, Criterion};
use diffavoid::{
    build_q, max_avoiding_set, power_residues, rank_mod_p, verify_certificate, FpVector, Matrix,
    Prime, SearchLimits,
};
use diffavoid_bench::residue_graph;

fn bench_verify(c: &mut Criterion) {
    let p = Prime::new(13).unwrap();
    let k = power_residues(p, 3).unwrap();
    let g = residue_graph(13, 2, 3);
    let witness: Vec<FpVector> = max_avoiding_set(&g, &SearchLimits::unlimited()).witness;
    c.bench_function("verify_certificate p13 n2 k3", |b| {
        b.iter(|| verify_certificate(&witness, p, 2, &k).unwrap())
    });

    let q = build_q(p, &k, 4).unwrap();
    let v = FpVector::new(p, vec![3, 5, 7, 11]).unwrap();
    c.bench_function("eval_q n4", |b| b.iter(|| q.eval(&v).unwrap()));
}

fn bench_rank(c: &mut Criterion) {
    let p = Prime::new(101).unwrap();
    let m = 128;
    let data = (0..m * m).map(|i| ((i * 7919 + 13) % 101) as u32).collect();
    let matrix = Matrix::new(m, m, data);
    c.bench_function("rank_mod_p 128x128", |b| b.iter(|| rank_mod_p(&matrix, p)));
}

criterion_group!(benches, bench_verify, bench_rank);
criterion_main!(benches);
