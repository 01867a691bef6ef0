//! Column-major dense matrix of `f64`.

use std::fmt;
use std::ops::{Index, IndexMut, Range};

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Products with at least this many multiply-adds are split across rayon
/// workers, one output column per task. Each column is accumulated in the
/// same order regardless of the worker count, so results are bitwise stable.
const PAR_WORK_THRESHOLD: usize = 1 << 18;

/// Dense real matrix stored column-major.
///
/// Both dimensions are at least one. Constructors that accept external data
/// reject NaN and infinities.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    /// All-zero matrix.
    ///
    /// # Panics
    /// If either dimension is zero.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Square diagonal matrix.
    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Wraps column-major data after checking its length and finiteness.
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "empty matrix {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} values, got {}",
                rows * cols,
                data.len()
            )));
        }
        let m = Self { rows, cols, data };
        m.check_finite()?;
        Ok(m)
    }

    /// Builds a matrix from row slices, which is the natural way to write
    /// small literals.
    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let mut data = vec![0.0; r * c];
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                data[j * r + i] = v;
            }
        }
        Self::from_col_major(r, c, data)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m.data[j * rows + i] = f(i, j);
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Column-major storage.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    #[inline]
    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    /// Mutable access to two distinct columns at once.
    pub(crate) fn two_cols_mut(&mut self, p: usize, q: usize) -> (&mut [f64], &mut [f64]) {
        debug_assert!(p < q);
        let r = self.rows;
        let (lo, hi) = self.data.split_at_mut(q * r);
        (&mut lo[p * r..(p + 1) * r], &mut hi[..r])
    }

    /// Returns the first offending position if any entry is NaN or infinite.
    pub fn check_finite(&self) -> Result<()> {
        match self.data.iter().position(|v| !v.is_finite()) {
            None => Ok(()),
            Some(idx) => Err(Error::NonFinite {
                row: idx % self.rows,
                col: idx / self.rows,
            }),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for j in 0..self.cols {
            for (i, &v) in self.col(j).iter().enumerate() {
                t.data[i * self.cols + j] = v;
            }
        }
        t
    }

    /// Copy of the columns in `range`.
    pub fn columns(&self, range: Range<usize>) -> Self {
        assert!(
            range.start < range.end && range.end <= self.cols,
            "column range out of bounds"
        );
        Self {
            rows: self.rows,
            cols: range.len(),
            data: self.data[range.start * self.rows..range.end * self.rows].to_vec(),
        }
    }

    /// Copy of the block `rows x cols`.
    pub fn submatrix(&self, rows: Range<usize>, cols: Range<usize>) -> Self {
        assert!(
            rows.end <= self.rows && cols.end <= self.cols,
            "block out of bounds"
        );
        let mut out = Self::zeros(rows.len(), cols.len());
        for (jj, j) in cols.enumerate() {
            out.col_mut(jj).copy_from_slice(&self.col(j)[rows.clone()]);
        }
        out
    }

    /// Stacks `self` on top of `below`.
    pub fn vstack(&self, below: &Self) -> Self {
        assert_eq!(self.cols, below.cols, "vstack needs equal column counts");
        let rows = self.rows + below.rows;
        let mut out = Self::zeros(rows, self.cols);
        for j in 0..self.cols {
            let c = out.col_mut(j);
            c[..self.rows].copy_from_slice(self.col(j));
            c[self.rows..].copy_from_slice(below.col(j));
        }
        out
    }

    /// Places `right` next to `self`.
    pub fn hstack(&self, right: &Self) -> Self {
        assert_eq!(self.rows, right.rows, "hstack needs equal row counts");
        let mut data = Vec::with_capacity(self.data.len() + right.data.len());
        data.extend_from_slice(&self.data);
        data.extend_from_slice(&right.data);
        Self {
            rows: self.rows,
            cols: self.cols + right.cols,
            data,
        }
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)])
            .collect()
    }

    pub fn trace(&self) -> f64 {
        self.diag().iter().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm2(&self.data)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scale(&self, alpha: f64) -> Self {
        let mut out = self.clone();
        out.scale_in_place(alpha);
        out
    }

    pub fn scale_in_place(&mut self, alpha: f64) {
        self.data.iter_mut().for_each(|v| *v *= alpha);
    }

    /// `self + alpha * other`.
    pub fn add_scaled(&self, alpha: f64, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled_in_place(alpha, other);
        out
    }

    pub fn add_scaled_in_place(&mut self, alpha: f64, other: &Self) {
        self.assert_same_shape(other);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += alpha * b;
        }
    }

    /// `beta * self + alpha * other`.
    pub fn combine(&self, beta: f64, alpha: f64, other: &Self) -> Self {
        self.assert_same_shape(other);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| beta * a + alpha * b)
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(-1.0, other)
    }

    /// Adds `alpha` to every diagonal entry.
    pub fn add_identity(&self, alpha: f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            out[(i, i)] += alpha;
        }
        out
    }

    /// Replaces a square matrix by `(M + Mᵀ) / 2`.
    pub fn symmetrize_in_place(&mut self) {
        assert!(self.is_square(), "symmetrize needs a square matrix");
        let n = self.rows;
        for j in 0..n {
            for i in (j + 1)..n {
                let avg = 0.5 * (self.data[j * n + i] + self.data[i * n + j]);
                self.data[j * n + i] = avg;
                self.data[i * n + j] = avg;
            }
        }
    }

    pub fn symmetrized(&self) -> Self {
        let mut out = self.clone();
        out.symmetrize_in_place();
        out
    }

    /// `‖M − Mᵀ‖_F / ‖M‖_F` (zero for the zero matrix), or `None` when not square.
    pub fn relative_asymmetry(&self) -> Option<f64> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut acc = 0.0;
        for j in 0..n {
            for i in (j + 1)..n {
                let d = self.data[j * n + i] - self.data[i * n + j];
                acc += 2.0 * d * d;
            }
        }
        let norm = self.frobenius_norm();
        Some(if norm == 0.0 { 0.0 } else { acc.sqrt() / norm })
    }

    /// `self * other`.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul: inner dimensions differ");
        let (m, k) = (self.rows, self.cols);
        let mut out = Self::zeros(m, other.cols);
        let kernel = |(j, c): (usize, &mut [f64])| {
            for (p, &b) in other.col(j).iter().enumerate() {
                if b != 0.0 {
                    axpy(b, &self.data[p * m..(p + 1) * m], c);
                }
            }
        };
        if m * k * other.cols >= PAR_WORK_THRESHOLD {
            out.data.par_chunks_mut(m).enumerate().for_each(kernel);
        } else {
            out.data.chunks_mut(m).enumerate().for_each(kernel);
        }
        out
    }

    /// `selfᵀ * other`, computed without forming the transpose.
    pub fn tr_matmul(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "tr_matmul: row counts differ");
        let m = self.cols;
        let mut out = Self::zeros(m, other.cols);
        let kernel = |(j, c): (usize, &mut [f64])| {
            let b = other.col(j);
            for (i, v) in c.iter_mut().enumerate() {
                *v = dot(self.col(i), b);
            }
        };
        if self.rows * m * other.cols >= PAR_WORK_THRESHOLD {
            out.data.par_chunks_mut(m).enumerate().for_each(kernel);
        } else {
            out.data.chunks_mut(m).enumerate().for_each(kernel);
        }
        out
    }

    /// `selfᵀ * self`, exactly symmetric.
    pub fn gram(&self) -> Self {
        let mut g = self.tr_matmul(self);
        g.symmetrize_in_place();
        g
    }

    /// `self * otherᵀ`.
    pub fn matmul_tr(&self, other: &Self) -> Self {
        self.matmul(&other.transpose())
    }

    /// Matrix-vector product.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, x.len(), "matvec: length mismatch");
        let mut y = vec![0.0; self.rows];
        for (j, &xj) in x.iter().enumerate() {
            axpy(xj, self.col(j), &mut y);
        }
        y
    }

    /// Transposed matrix-vector product.
    pub fn tr_matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.rows, x.len(), "tr_matvec: length mismatch");
        (0..self.cols).map(|j| dot(self.col(j), x)).collect()
    }

    /// Copy with columns taken in the order given by `perm`.
    pub(crate) fn permute_columns(&self, perm: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, perm.len());
        for (dst, &src) in perm.iter().enumerate() {
            out.col_mut(dst).copy_from_slice(self.col(src));
        }
        out
    }

    fn assert_same_shape(&self, other: &Self) {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "shape mismatch: {}x{} vs {}x{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[j * self.rows + i]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[j * self.rows + i]
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows.min(8) {
            let row: Vec<String> = (0..self.cols.min(8))
                .map(|j| format!("{:>12.4e}", self[(i, j)]))
                .collect();
            writeln!(
                f,
                "  {}{}",
                row.join(" "),
                if self.cols > 8 { " ..." } else { "" }
            )?;
        }
        if self.rows > 8 {
            writeln!(f, "  ...")?;
        }
        write!(f, "]")
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    // Four accumulators let the compiler vectorize; the summation order is fixed.
    let mut acc = [0.0f64; 4];
    let chunks = a.len() / 4;
    for c in 0..chunks {
        let i = 4 * c;
        acc[0] += a[i] * b[i];
        acc[1] += a[i + 1] * b[i + 1];
        acc[2] += a[i + 2] * b[i + 2];
        acc[3] += a[i + 3] * b[i + 3];
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for i in 4 * chunks..a.len() {
        s += a[i] * b[i];
    }
    s
}

#[inline]
pub(crate) fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Euclidean norm with scaling so huge or tiny entries neither overflow nor underflow.
pub(crate) fn norm2(x: &[f64]) -> f64 {
    let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    let inv = 1.0 / scale;
    let ss: f64 = x.iter().map(|v| (v * inv) * (v * inv)).sum();
    scale * ss.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_rows_is_column_major() {
        let m = DenseMatrix::from_rows(&[&[1.0, 2.0], &[3.0, 4.0], &[5.0, 6.0]]).unwrap();
        assert_eq!(m.data(), &[1.0, 3.0, 5.0, 2.0, 4.0, 6.0]);
        assert_eq!(m[(2, 1)], 6.0);
    }

    #[test]
    fn rejects_non_finite_and_bad_lengths() {
        assert_eq!(
            DenseMatrix::from_col_major(2, 1, vec![1.0, f64::NAN]),
            Err(Error::NonFinite { row: 1, col: 0 })
        );
        assert!(matches!(
            DenseMatrix::from_col_major(2, 2, vec![1.0; 3]),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(DenseMatrix::from_col_major(0, 2, vec![]).is_err());
    }

    #[test]
    fn products_agree_with_naive_triple_loop() {
        let a = DenseMatrix::from_fn(70, 50, |i, j| ((i * 7 + j * 3) % 11) as f64 - 5.0);
        let b = DenseMatrix::from_fn(50, 90, |i, j| ((i * 5 + j) % 13) as f64 * 0.5);
        let c = a.matmul(&b);
        for i in 0..70 {
            for j in 0..90 {
                let want: f64 = (0..50).map(|p| a[(i, p)] * b[(p, j)]).sum();
                assert!((c[(i, j)] - want).abs() < 1e-10);
            }
        }
        let at = a.transpose();
        let d = at.tr_matmul(&b);
        assert!(d.sub(&c).max_abs() < 1e-10);
        let e = a.matmul_tr(&b.transpose());
        assert!(e.sub(&c).max_abs() < 1e-10);
    }

    #[test]
    fn norm2_survives_extreme_scales() {
        assert!((norm2(&[3e200, 4e200]) / 5e200 - 1.0).abs() < 1e-15);
        assert!((norm2(&[3e-200, 4e-200]) - 5e-200).abs() < 1e-214);
    }

    #[test]
    fn asymmetry_and_symmetrize() {
        let mut m = DenseMatrix::from_rows(&[&[1.0, 2.0], &[4.0, 1.0]]).unwrap();
        assert!(m.relative_asymmetry().unwrap() > 0.5);
        m.symmetrize_in_place();
        assert_eq!(m[(0, 1)], 3.0);
        assert_eq!(m.relative_asymmetry(), Some(0.0));
    }
}
