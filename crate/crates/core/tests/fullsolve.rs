use qdwh_core::fullsolve::{qdwh_eig_full, qdwh_svd_full, DEFAULT_BASE_SIZE};
use qdwh_core::kernels::{gaussian_matrix, singular_values, sym_eig_dense, Seed};
use qdwh_core::polar::{polar_decompose, PolarConfig};
use qdwh_core::DenseMatrix;

fn sym(n: usize, seed: u64) -> DenseMatrix {
    let g = gaussian_matrix(n, n, Seed(seed));
    g.add_scaled(1.0, &g.transpose())
}

fn eig_residual(a: &DenseMatrix, values: &[f64], v: &DenseMatrix) -> f64 {
    let mut av = a.matmul(v);
    for (j, &l) in values.iter().enumerate() {
        let vj = v.col(j).to_vec();
        av.col_mut(j)
            .iter_mut()
            .zip(vj)
            .for_each(|(x, y)| *x -= l * y);
    }
    av.frobenius_norm()
}

#[test]
fn eig_agrees_with_dense_oracle() {
    for seed in 0..20u64 {
        let n = 24 + (seed as usize * 13) % 105;
        let a = sym(n, seed);
        let r = qdwh_eig_full(&a, DEFAULT_BASE_SIZE).unwrap();
        let oracle = sym_eig_dense(&a).unwrap().values;
        let norm = oracle[0].abs().max(oracle[n - 1].abs());
        for (x, y) in r.values.iter().zip(&oracle) {
            assert!((x - y).abs() <= 1e-12 * norm, "seed {seed}: {x} vs {y}");
        }
        assert!(eig_residual(&a, &r.values, &r.vectors) <= 1e-12 * a.frobenius_norm());
        let orth = r.vectors.gram().add_identity(-1.0).frobenius_norm() / (n as f64).sqrt();
        assert!(orth <= 1e-13, "seed {seed}: {orth}");
        if n > DEFAULT_BASE_SIZE {
            assert!(r.depth >= 1);
        }
    }
}

#[test]
fn spectral_projector_of_shifted_matrix() {
    let n = 60;
    let a = sym(n, 77);
    let sigma = a.trace() / n as f64;
    let up = polar_decompose(&a.add_identity(-sigma), &PolarConfig::default())
        .unwrap()
        .up;
    let c = up.scale(-0.5).add_identity(0.5);
    let idem = c.matmul(&c).sub(&c).frobenius_norm();
    assert!(idem <= 1e-12 * n as f64, "{idem}");
    let t = c.trace();
    assert!((t - t.round()).abs() <= 0.01, "{t}");
    let below = sym_eig_dense(&a)
        .unwrap()
        .values
        .iter()
        .filter(|&&l| l < sigma)
        .count();
    assert_eq!(t.round() as usize, below);
}

#[test]
fn svd_of_tall_matrix() {
    let a = gaussian_matrix(96, 64, Seed(12));
    let r = qdwh_svd_full(&a).unwrap();
    let oracle = singular_values(&a).unwrap();
    for (x, y) in r.sigma.iter().zip(&oracle) {
        assert!((x - y).abs() <= 1e-12 * oracle[0], "{x} vs {y}");
        assert!(((x - y) / y).abs() <= 1e-12);
    }
    let mut us = r.u.clone();
    for (j, &s) in r.sigma.iter().enumerate() {
        us.col_mut(j).iter_mut().for_each(|x| *x *= s);
    }
    assert!(us.matmul_tr(&r.v).sub(&a).frobenius_norm() <= 1e-12 * a.frobenius_norm());
    assert!(r.u.gram().add_identity(-1.0).max_abs() < 1e-13);
    assert!(r.v.gram().add_identity(-1.0).max_abs() < 1e-13);
}
