use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qdwh_bench::{eig_input, svd_input, SIZES};
use qdwh_core::fullsolve::{qdwh_eig_full, qdwh_svd_full, DEFAULT_BASE_SIZE};
use qdwh_core::kernels::sym_eig_dense;
use qdwh_core::partial::{choose_shift, qdwh_partial_eig, qdwh_partial_svd, DEFAULT_RANK_TOL};
use qdwh_core::Seed;

fn eig(c: &mut Criterion) {
    let plan = choose_shift(3).unwrap();
    let mut g = c.benchmark_group("eig");
    g.sample_size(10);
    for n in SIZES {
        let a = eig_input(n);
        g.bench_with_input(BenchmarkId::new("partial", n), &a, |b, a| {
            b.iter(|| qdwh_partial_eig(a, &plan, false, DEFAULT_RANK_TOL, Seed(0)).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("full", n), &a, |b, a| {
            b.iter(|| qdwh_eig_full(a, DEFAULT_BASE_SIZE).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("jacobi", n), &a, |b, a| {
            b.iter(|| sym_eig_dense(a).unwrap())
        });
    }
    g.finish();
}

fn svd(c: &mut Criterion) {
    let mut g = c.benchmark_group("svd");
    g.sample_size(10);
    for n in SIZES {
        let a = svd_input(n);
        for s in [1e-1, 1e-4] {
            g.bench_with_input(
                BenchmarkId::new(format!("partial-s{s:e}"), n),
                &a,
                |b, a| b.iter(|| qdwh_partial_svd(a, s, DEFAULT_RANK_TOL, false, Seed(0)).unwrap()),
            );
        }
        g.bench_with_input(BenchmarkId::new("full", n), &a, |b, a| {
            b.iter(|| qdwh_svd_full(a).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, eig, svd);
criterion_main!(benches);
