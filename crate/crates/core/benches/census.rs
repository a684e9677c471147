//! Sequential against rayon-parallel execution of the batch entry points.

use std::hint::black_box;

use conjwidth::census::{enumerate_sl, width_census};
use conjwidth::elemgen::factor_count_census;
use conjwidth::norms::{axiom_harness, models};
use conjwidth::widthred::reduce_batch;
use conjwidth::{Execution, Ideal, RingSpec, SqMatrix};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn width(c: &mut Criterion) {
    let f2 = RingSpec::integers_mod(2).unwrap();
    let table = enumerate_sl(3, f2, 1000).unwrap();
    let q = Ideal::whole(f2);
    let mut group = c.benchmark_group("width_census_sl3_f2");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(width_census(&table, &q, exec).unwrap()))
        });
    }
    group.finish();
}

fn factors(c: &mut Criterion) {
    let r = RingSpec::integers_mod(9).unwrap();
    let mut group = c.benchmark_group("factor_count_sl2_z9");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(factor_count_census(2, r, 10_000, exec).unwrap()))
        });
    }
    group.finish();
}

fn reductions(c: &mut Criterion) {
    let z = RingSpec::Integers;
    let q = Ideal::principal(z.int(2));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut inputs = Vec::new();
    while inputs.len() < 32 {
        let mut g = SqMatrix::identity(z, 3).unwrap();
        for _ in 0..10 {
            let i = rng.gen_range(1..=3);
            let j = (i + rng.gen_range(0..2)) % 3 + 1;
            g = &g * &SqMatrix::elementary(z, 3, i, j, z.int(2 * rng.gen_range(-3..=3))).unwrap();
        }
        if !g.is_scalar() {
            inputs.push(g);
        }
    }
    let targets = [(1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2)];
    let mut group = c.benchmark_group("reduce_batch_sl3_z");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(reduce_batch(&inputs, &q, &targets, exec)))
        });
    }
    group.finish();
}

fn harness(c: &mut Criterion) {
    let (g, n) = models::average_sl3_mod4().unwrap();
    let mut group = c.benchmark_group("axiom_harness_average");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(axiom_harness(&g, &n, 200, 7, exec)))
        });
    }
    group.finish();
}

criterion_group!(benches, width, factors, reductions, harness);
criterion_main!(benches);
