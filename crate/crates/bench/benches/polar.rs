use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qdwh_bench::{conditioned_input, gaussian_input, SIZES};
use qdwh_core::kernels::{qr_factor, svd_dense};
use qdwh_core::polar::{polar_decompose, PolarConfig, StepVariant};

fn polar(c: &mut Criterion) {
    let mut g = c.benchmark_group("polar");
    g.sample_size(10);
    for n in SIZES {
        let a = conditioned_input(n, 1e6);
        for (name, variant) in [
            ("auto", StepVariant::Auto),
            ("qr-only", StepVariant::QrOnly),
        ] {
            let cfg = PolarConfig::default().with_variant(variant);
            g.bench_with_input(BenchmarkId::new(name, n), &a, |b, a| {
                b.iter(|| polar_decompose(a, &cfg).unwrap())
            });
        }
    }
    g.finish();
}

fn kernels(c: &mut Criterion) {
    let mut g = c.benchmark_group("kernels");
    g.sample_size(10);
    for n in SIZES {
        let a = gaussian_input(n);
        g.bench_with_input(BenchmarkId::new("qr", n), &a, |b, a| {
            b.iter(|| qr_factor(a).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("jacobi-svd", n), &a, |b, a| {
            b.iter(|| svd_dense(a).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, polar, kernels);
criterion_main!(benches);
