use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use intform::detengine::{al_gram, det_al, DEFAULT_BUDGET};
use intform::lattice::IntegerLattice;
use intform::linalg::{bareiss_determinant, smith_normal_form, IntMatrix};
use intform::schur::index_a_over_b;

/// Deterministic dense test matrix with small entries.
fn pseudo_random(n: usize, seed: i64) -> IntMatrix {
    let mut x = seed;
    let rows = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    x = (x * 1_103_515_245 + 12_345) % 2_147_483_648;
                    x % 19 - 9
                })
                .collect()
        })
        .collect::<Vec<Vec<i64>>>();
    IntMatrix::from_i64_rows(&rows).unwrap()
}

fn bareiss(c: &mut Criterion) {
    let mut g = c.benchmark_group("bareiss");
    for n in [8, 16, 32] {
        let m = pseudo_random(n, n as i64);
        g.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| bareiss_determinant(black_box(m)).unwrap())
        });
    }
    g.finish();
}

fn smith(c: &mut Criterion) {
    let mut g = c.benchmark_group("smith");
    for n in [8, 16, 24] {
        let m = pseudo_random(n, 7 * n as i64);
        g.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| smith_normal_form(black_box(m)))
        });
    }
    g.finish();
}

fn schur_gram(c: &mut Criterion) {
    let mut g = c.benchmark_group("a_basis_gram");
    g.sample_size(10);
    for (name, n) in [("A1", 6), ("A2", 4), ("A1A1", 4)] {
        let l = IntegerLattice::builtin(name).unwrap();
        g.bench_function(format!("{name}/n={n}/gram"), |b| {
            b.iter(|| al_gram(&l, n, DEFAULT_BUDGET).unwrap())
        });
        g.bench_function(format!("{name}/n={n}/det"), |b| b.iter(|| det_al(&l, n, DEFAULT_BUDGET).unwrap()));
    }
    g.bench_function("index/k=3/n=5", |b| b.iter(|| index_a_over_b(3, 5, DEFAULT_BUDGET).unwrap()));
    g.finish();
}

fn shells(c: &mut Criterion) {
    let mut g = c.benchmark_group("shell_counts");
    for (name, max_norm) in [("A2", 16), ("A1A1", 16), ("Z4", 8)] {
        let l = IntegerLattice::builtin(name).unwrap();
        g.bench_function(format!("{name}/{max_norm}"), |b| b.iter(|| l.shell_counts(black_box(max_norm))));
    }
    g.finish();
}

criterion_group!(benches, bareiss, smith, schur_gram, shells);
criterion_main!(benches);
