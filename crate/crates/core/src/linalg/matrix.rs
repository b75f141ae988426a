use std::ops::{Index, IndexMut};

use cblas_sys::{cblas_zgemm, CBLAS_LAYOUT, CBLAS_TRANSPOSE};
use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Dense complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("empty matrix {rows}x{cols}")));
        }
        let len = rows.checked_mul(cols).ok_or_else(|| Error::Dimension(format!("{rows}x{cols} overflows")))?;
        if data.len() != len {
            return Err(Error::Dimension(format!("{rows}x{cols} matrix needs {len} entries, got {}", data.len())));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Invalid("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub(crate) fn from_vec_unchecked(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        debug_assert_eq!(rows * cols, data.len());
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.data[i * self.cols + j]).collect()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols)).map(|i| self.data[i * self.cols + i]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> C64 {
        self.diagonal().iter().sum()
    }

    /// Squared Hilbert-Schmidt (Frobenius) norm.
    pub fn hs_norm_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    pub fn max_offdiag_abs(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    m = m.max(self[(i, j)].norm());
                }
            }
        }
        m
    }

    /// max |h_ij - conj(h_ji)|.
    pub fn hermiticity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut r: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                r = r.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        r
    }

    /// max |(u†u - I)_ij|, computed densely.
    pub fn unitarity_residual(&self) -> Result<f64> {
        let g = self.adjoint_mul(self)?;
        Ok(g.max_abs_diff(&Self::identity(self.cols))?)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!("{}x{} vs {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        Ok(())
    }

    /// Matrix product `self · other`.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(gemm(self, false, other))
    }

    /// `self† · other`.
    pub fn adjoint_mul(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply adjoint of {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(gemm(self, true, other))
    }

    pub fn mul_vec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    /// `self† · v`.
    pub fn adjoint_mul_vec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.rows {
            return Err(Error::Dimension(format!("vector of length {} for {} rows", v.len(), self.rows)));
        }
        let mut out = vec![C64::new(0.0, 0.0); self.cols];
        for (i, &vi) in v.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a.conj() * vi;
            }
        }
        Ok(out)
    }

    /// In place `diag(d) · self`.
    pub fn scale_rows(&mut self, d: &[C64]) -> Result<()> {
        if d.len() != self.rows {
            return Err(Error::Dimension(format!("{} scales for {} rows", d.len(), self.rows)));
        }
        for (i, &s) in d.iter().enumerate() {
            for z in &mut self.data[i * self.cols..(i + 1) * self.cols] {
                *z *= s;
            }
        }
        Ok(())
    }

    /// In place `self · diag(d)`.
    pub fn scale_cols(&mut self, d: &[C64]) -> Result<()> {
        if d.len() != self.cols {
            return Err(Error::Dimension(format!("{} scales for {} columns", d.len(), self.cols)));
        }
        for row in self.data.chunks_mut(self.cols) {
            for (z, &s) in row.iter_mut().zip(d) {
                *z *= s;
            }
        }
        Ok(())
    }

    /// Columns `idx` as a new `rows x idx.len()` matrix.
    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])])
    }
}

pub(crate) fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gemm(a: &CMatrix, adjoint_a: bool, b: &CMatrix) -> CMatrix {
    let (m, k) = if adjoint_a { (a.cols, a.rows) } else { (a.rows, a.cols) };
    let n = b.cols;
    let mut c = CMatrix::zeros(m, n);
    let one = [1.0f64, 0.0];
    let zero = [0.0f64, 0.0];
    let trans = if adjoint_a { CBLAS_TRANSPOSE::CblasConjTrans } else { CBLAS_TRANSPOSE::CblasNoTrans };
    // SAFETY: buffers are sized m*k (or k*m), k*n and m*n with the row-major strides passed;
    // Complex64 is layout-compatible with [f64; 2].
    unsafe {
        cblas_zgemm(
            CBLAS_LAYOUT::CblasRowMajor,
            trans,
            CBLAS_TRANSPOSE::CblasNoTrans,
            m as i32,
            n as i32,
            k as i32,
            &one,
            a.data.as_ptr() as *const _,
            a.cols as i32,
            b.data.as_ptr() as *const _,
            b.cols as i32,
            &zero,
            c.data.as_mut_ptr() as *mut _,
            n as i32,
        );
    }
    c
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

/// Kronecker product with composite index (i1, i2) -> i1 * rows(b) + i2.
pub fn kron(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let rows = a.rows.checked_mul(b.rows);
    let cols = a.cols.checked_mul(b.cols);
    let (rows, cols) = match (rows, cols) {
        (Some(r), Some(c)) if r.checked_mul(c).is_some() => (r, c),
        _ => return Err(Error::Dimension("Kronecker product size overflows".into())),
    };
    let mut data = Vec::with_capacity(rows * cols);
    for i1 in 0..a.rows {
        for i2 in 0..b.rows {
            let brow = b.row(i2);
            for &x in a.row(i1) {
                data.extend(brow.iter().map(|&y| x * y));
            }
        }
    }
    Ok(CMatrix::from_vec_unchecked(rows, cols, data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RngStream;

    fn random(rows: usize, cols: usize, seed: u64) -> CMatrix {
        let mut r = RngStream::new(seed, 0).rng();
        CMatrix::from_fn(rows, cols, |_, _| r.complex_gaussian())
    }

    fn naive_mul(a: &CMatrix, b: &CMatrix) -> CMatrix {
        CMatrix::from_fn(a.rows(), b.cols(), |i, j| (0..a.cols()).map(|k| a[(i, k)] * b[(k, j)]).sum())
    }

    #[test]
    fn identity_kron() {
        assert_eq!(kron(&CMatrix::identity(2), &CMatrix::identity(3)).unwrap(), CMatrix::identity(6));
    }

    #[test]
    fn kron_trace_and_index() {
        let a = random(3, 3, 1);
        let b = random(4, 4, 2);
        let k = kron(&a, &b).unwrap();
        assert!((k.trace() - a.trace() * b.trace()).norm() < 1e-12);
        assert_eq!(k[(1 * 4 + 2, 2 * 4 + 3)], a[(1, 2)] * b[(2, 3)]);
    }

    #[test]
    fn gemm_matches_naive() {
        let a = random(5, 7, 3);
        let b = random(7, 4, 4);
        assert!(a.matmul(&b).unwrap().max_abs_diff(&naive_mul(&a, &b)).unwrap() < 1e-12);
        let c = random(5, 3, 5);
        let want = naive_mul(&a.adjoint(), &c);
        assert!(a.adjoint_mul(&c).unwrap().max_abs_diff(&want).unwrap() < 1e-12);
        assert!(a.matmul(&c).is_err());
    }

    #[test]
    fn vector_products() {
        let a = random(4, 6, 6);
        let v: Vec<C64> = (0..6).map(|i| C64::new(i as f64, 1.0)).collect();
        let w = a.mul_vec(&v).unwrap();
        let m = CMatrix::new(6, 1, v.clone()).unwrap();
        let want = a.matmul(&m).unwrap();
        for i in 0..4 {
            assert!((w[i] - want[(i, 0)]).norm() < 1e-12);
        }
        let u: Vec<C64> = (0..4).map(|i| C64::new(1.0, i as f64)).collect();
        let z = a.adjoint_mul_vec(&u).unwrap();
        let z2 = a.adjoint().mul_vec(&u).unwrap();
        for (x, y) in z.iter().zip(&z2) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn scaling_matches_diagonal_products() {
        let a = random(3, 3, 7);
        let d = vec![C64::new(1.0, 2.0), C64::new(-1.0, 0.5), C64::new(0.0, 3.0)];
        let mut r = a.clone();
        r.scale_rows(&d).unwrap();
        assert!(r.max_abs_diff(&naive_mul(&CMatrix::from_diagonal(&d), &a)).unwrap() < 1e-14);
        let mut c = a.clone();
        c.scale_cols(&d).unwrap();
        assert!(c.max_abs_diff(&naive_mul(&a, &CMatrix::from_diagonal(&d))).unwrap() < 1e-14);
    }

    #[test]
    fn construction_errors() {
        assert!(CMatrix::new(0, 3, vec![]).is_err());
        assert!(CMatrix::new(2, 2, vec![C64::new(0.0, 0.0); 3]).is_err());
        assert!(CMatrix::new(1, 1, vec![C64::new(f64::NAN, 0.0)]).is_err());
    }
}
