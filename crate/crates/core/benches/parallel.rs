use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use epr_core::continuum::{convergence_sweep_with, renormalized_pairing_with, GridEmbedding, TestFunction};
use epr_core::epr::{construct_epr_state, is_epr};
use epr_core::sample::random_block_structure;
use epr_core::{Execution, Observable, PureState, Tolerances};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

const PATHS: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn pairing(c: &mut Criterion) {
    let mut group = c.benchmark_group("renormalized_pairing");
    let f = TestFunction::Gauss;
    for n in [1601usize, 25601] {
        let emb = GridEmbedding::new(n).unwrap();
        for (name, exec) in PATHS {
            group.bench_with_input(BenchmarkId::new(name, n), &emb, |b, emb| {
                b.iter(|| renormalized_pairing_with(exec, black_box(emb), &f, &f))
            });
        }
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("convergence_sweep");
    let f = TestFunction::Gauss;
    let g = TestFunction::ShiftedGauss(0.5);
    let ns = [101, 401, 1601, 6401];
    for (name, exec) in PATHS {
        group.bench_function(name, |b| {
            b.iter(|| convergence_sweep_with(exec, black_box(&ns), &f, &g).unwrap())
        });
    }
    group.finish();
}

fn batch_criterion(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let cases: Vec<(PureState, Vec<Observable>)> = (0..64)
        .map(|_| {
            let bs = random_block_structure(12, 10, &[2, 3, 1, 2], &mut rng);
            let s = construct_epr_state(&bs.lambdas, &bs.blocks, &bs.imbedding).unwrap();
            let obs = (0..4).map(|_| bs.commuting_observable(&mut rng, &tol)).collect();
            (s, obs)
        })
        .collect();
    let mut group = c.benchmark_group("is_epr_batch");
    for (name, exec) in PATHS {
        group.bench_function(name, |b| {
            b.iter(|| exec.map(&cases, |(s, obs)| is_epr(s, obs, &tol).unwrap().is_epr))
        });
    }
    group.finish();
}

criterion_group!(benches, pairing, sweep, batch_criterion);
criterion_main!(benches);
