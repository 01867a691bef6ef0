//! Orthogonality, value and residual metrics for computed spectra.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::matrix::norm2;
use crate::kernels::DenseMatrix;

/// Which vectors the residual metrics pair with `A` and `Aᵀ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ResidualPairing {
    /// `‖A vᵢ − σᵢ uᵢ‖` and `‖Aᵀ uᵢ − σᵢ vᵢ‖`.
    #[default]
    Standard,
    /// `‖A uᵢ − σᵢ vᵢ‖` and `‖A vᵢ − σᵢ uᵢ‖`, only defined for square `A`.
    AsPrinted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccuracyReport {
    pub orth_left: f64,
    pub orth_right: f64,
    /// `‖Σ − Δ‖_F / ‖Δ‖_F`; `None` without reference values.
    pub value_err: Option<f64>,
    pub resid_right: f64,
    pub resid_left: f64,
    pub n: usize,
    pub k: usize,
}

impl AccuracyReport {
    pub fn orth(&self) -> f64 {
        self.orth_left.max(self.orth_right)
    }

    pub fn resid(&self) -> f64 {
        self.resid_left.max(self.resid_right)
    }
}

/// `‖I − XᵀX‖_F / n`.
pub fn orthogonality(x: &DenseMatrix, n: usize) -> f64 {
    x.gram().add_identity(-1.0).frobenius_norm() / n as f64
}

/// `‖Σ − Δ‖_F / ‖Δ‖_F`.
pub fn value_error(sigma: &[f64], delta: &[f64]) -> Result<f64> {
    if sigma.len() != delta.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} computed values vs {} reference values",
            sigma.len(),
            delta.len()
        )));
    }
    let diff: Vec<f64> = sigma.iter().zip(delta).map(|(s, d)| s - d).collect();
    let dn = norm2(delta);
    Ok(if dn == 0.0 {
        norm2(&diff)
    } else {
        norm2(&diff) / dn
    })
}

fn max_column_residual(av: &DenseMatrix, sigma: &[f64], u: &DenseMatrix) -> f64 {
    (0..sigma.len())
        .map(|i| {
            let r: Vec<f64> = av
                .col(i)
                .iter()
                .zip(u.col(i))
                .map(|(x, y)| x - sigma[i] * y)
                .collect();
            norm2(&r)
        })
        .fold(0.0, f64::max)
}

/// Metrics for a partial decomposition `A ≈ U diag(Σ) Vᵀ` with `k`
/// triplets. For symmetric eigenpairs pass `U = V` and `Σ = Λ`.
///
/// Orthogonality is scaled by `1/n` with `n = cols(A)`.
pub fn accuracy_report(
    a: &DenseMatrix,
    u: &DenseMatrix,
    sigma: &[f64],
    v: &DenseMatrix,
    delta: Option<&[f64]>,
    pairing: ResidualPairing,
) -> Result<AccuracyReport> {
    let (m, n, k) = (a.rows(), a.cols(), sigma.len());
    if u.rows() != m || v.rows() != n || u.cols() != k || v.cols() != k {
        return Err(Error::DimensionMismatch(format!(
            "A {m}x{n}, U {}x{}, V {}x{}, {k} values",
            u.rows(),
            u.cols(),
            v.rows(),
            v.cols()
        )));
    }
    let value_err = delta.map(|d| value_error(sigma, d)).transpose()?;
    let (resid_right, resid_left) = match pairing {
        ResidualPairing::Standard => (
            max_column_residual(&a.matmul(v), sigma, u),
            max_column_residual(&a.tr_matmul(u), sigma, v),
        ),
        ResidualPairing::AsPrinted => {
            if m != n {
                return Err(Error::DimensionMismatch(
                    "printed residual pairing needs square A".into(),
                ));
            }
            (
                max_column_residual(&a.matmul(v), sigma, u),
                max_column_residual(&a.matmul(u), sigma, v),
            )
        }
    };
    Ok(AccuracyReport {
        orth_left: orthogonality(u, n),
        orth_right: orthogonality(v, n),
        value_err,
        resid_right,
        resid_left,
        n,
        k,
    })
}
