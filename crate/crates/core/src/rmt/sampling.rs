use crate::linalg::CMatrix;
use crate::numerics::RngStream;
use crate::{Error, Result, C64};

/// Haar-distributed unitary: Gram-Schmidt on a complex Ginibre matrix.
///
/// Gram-Schmidt leaves the triangular factor with a positive real diagonal, which is
/// exactly the phase fixing that makes the orthonormalized columns Haar distributed.
pub fn sample_cue(n: usize, stream: RngStream) -> Result<CMatrix> {
    if n < 1 {
        return Err(Error::Invalid("CUE dimension must be positive".into()));
    }
    let mut rng = stream.rng();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|_| (0..n).map(|_| rng.complex_gaussian()).collect()).collect();
    for j in 0..n {
        let (done, rest) = cols.split_at_mut(j);
        let v = &mut rest[0];
        // two passes keep orthogonality at machine precision
        for _ in 0..2 {
            for q in done.iter() {
                let proj: C64 = q.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
                for (x, a) in v.iter_mut().zip(q) {
                    *x -= proj * a;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::NonConvergence { routine: "gram_schmidt", info: j as i32 });
        }
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
    Ok(CMatrix::from_fn(n, n, |i, j| cols[j][i]))
}

/// COE matrix W = Uᵀ U with U drawn from the CUE.
pub fn sample_coe(n: usize, stream: RngStream) -> Result<CMatrix> {
    let u = sample_cue(n, stream)?;
    u.transpose().matmul(&u)
}
