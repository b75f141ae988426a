//! Dense complex matrices, Kronecker products, unitary and Hermitian eigensolvers, SVD.

mod eig;
mod lapack;
mod matrix;

pub use eig::{eig_unitary, eigh, unitarity_probe, wrap_phase, SpectralDecomposition};
pub(crate) use matrix::dot;
pub use matrix::{kron, CMatrix};

use crate::{Error, Result};

/// Squared singular values (descending) and, when requested, the thin factors.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdSquares {
    pub squares: Vec<f64>,
    /// (left, right) with m = left · diag(σ) · right.
    pub factors: Option<(CMatrix, CMatrix)>,
}

pub fn svd_values_and_squares(m: &CMatrix, vectors: bool) -> Result<SvdSquares> {
    let (s, factors) = lapack::svd(m, vectors)?;
    if s.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonConvergence { routine: "zgesvd", info: -1 });
    }
    Ok(SvdSquares { squares: s.iter().map(|x| x * x).collect(), factors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RngStream;
    use crate::C64;

    #[test]
    fn rank_one_and_unitary() {
        let x = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let y = [C64::new(0.0, 1.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
        let m = CMatrix::from_fn(2, 3, |i, j| x[i] * y[j].conj());
        let s = svd_values_and_squares(&m, false).unwrap();
        assert!((s.squares[0] - 1.0).abs() < 1e-14 && s.squares[1].abs() < 1e-14);
        let s = svd_values_and_squares(&CMatrix::identity(4), false).unwrap();
        assert!(s.squares.iter().all(|v| (v - 1.0).abs() < 1e-14));
    }

    #[test]
    fn squares_match_gram_eigenvalues() {
        let mut r = RngStream::new(3, 1).rng();
        let m = CMatrix::from_fn(5, 9, |_, _| r.complex_gaussian());
        let s = svd_values_and_squares(&m, true).unwrap();
        let g = m.matmul(&m.adjoint()).unwrap();
        let (mut w, _) = eigh(&g).unwrap();
        w.reverse();
        for (a, b) in s.squares.iter().zip(&w) {
            assert!((a - b).abs() < 1e-10 * w[0]);
        }
        let total: f64 = s.squares.iter().sum();
        assert!((total - m.hs_norm_sq()).abs() < 1e-10 * total);
        let (left, right) = s.factors.unwrap();
        let mut l = left.clone();
        let sig: Vec<C64> = s.squares.iter().map(|v| C64::new(v.sqrt(), 0.0)).collect();
        l.scale_cols(&sig).unwrap();
        assert!(l.matmul(&right).unwrap().max_abs_diff(&m).unwrap() < 1e-12);
        let st = svd_values_and_squares(&m.adjoint(), false).unwrap();
        for (a, b) in s.squares.iter().zip(&st.squares) {
            assert!((a - b).abs() < 1e-10 * s.squares[0]);
        }
    }
}
