use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::lapack::{hermitian_eigen, schur};
use super::{dot, CMatrix};
use crate::{Error, Result, C64};

/// Eigenphases in [0, 2π), ascending, with orthonormal eigenvectors as columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralDecomposition {
    pub phases: Vec<f64>,
    pub vectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    /// max_n ‖u v_n − e^{iφ_n} v_n‖₂ (dense, O(N³)).
    pub fn residual(&self, u: &CMatrix) -> Result<f64> {
        let uv = u.matmul(&self.vectors)?;
        let n = self.len();
        let mut worst: f64 = 0.0;
        for j in 0..n {
            let e = C64::from_polar(1.0, self.phases[j]);
            let r: f64 = (0..n).map(|i| (uv[(i, j)] - e * self.vectors[(i, j)]).norm_sqr()).sum();
            worst = worst.max(r.sqrt());
        }
        Ok(worst)
    }

    /// V diag(e^{iφ}) V†.
    pub fn reconstruct(&self) -> CMatrix {
        let mut vd = self.vectors.clone();
        let d: Vec<C64> = self.phases.iter().map(|&p| C64::from_polar(1.0, p)).collect();
        vd.scale_cols(&d).expect("phase count matches columns");
        vd.matmul(&self.vectors.adjoint()).expect("square factors")
    }
}

/// Maps an angle into [0, 2π), sending values that round to 2π onto 0.
pub fn wrap_phase(phi: f64) -> f64 {
    let mut p = phi.rem_euclid(TAU);
    if p >= TAU {
        p = 0.0;
    }
    p
}

/// Applies u and then u† to a few fixed probe vectors and reports max |u†u x − x|.
///
/// Costs O(N²) instead of the O(N³) of forming u†u.
pub fn unitarity_probe(u: &CMatrix) -> Result<f64> {
    let n = u.rows();
    let mut worst: f64 = 0.0;
    for p in 0..3u32 {
        let x: Vec<C64> = (0..n)
            .map(|j| {
                let t = ((j as f64 + 1.0) * (p as f64 + 1.0) * 0.618_033_988_749_894_9).fract();
                C64::from_polar(1.0, TAU * t)
            })
            .collect();
        let y = u.mul_vec(&x)?;
        let z = u.adjoint_mul_vec(&y)?;
        for (a, b) in z.iter().zip(&x) {
            worst = worst.max((a - b).norm());
        }
    }
    Ok(worst)
}

// Neighbouring eigenvalues of (u + u†)/2 closer than this are resolved jointly.
const CLUSTER_GAP: f64 = 1e-5;
// Below this |sin φ| the phase comes from the full Rayleigh quotient.
const SMALL_SINE: f64 = 1e-3;
const PROBE_COMPONENTS: usize = 4;

/// Spectral decomposition of a unitary matrix.
///
/// Diagonalizes the Hermitian part (u + u†)/2, whose eigenvalues are cos φ. The sign of
/// sin φ is read off the largest components of each eigenvector; groups of nearly
/// degenerate cosines (φ and −φ' close) are re-diagonalized inside their invariant
/// subspace through a small Schur decomposition.
pub fn eig_unitary(u: &CMatrix) -> Result<SpectralDecomposition> {
    if !u.is_square() {
        return Err(Error::Dimension(format!("eig_unitary needs a square matrix, got {}x{}", u.rows(), u.cols())));
    }
    let n = u.rows();
    let probe = unitarity_probe(u)?;
    if !(probe <= 1e-8 * (n as f64).sqrt().max(1.0)) {
        return Err(Error::NotUnitary { residual: probe });
    }
    let h = CMatrix::from_fn(n, n, |i, j| 0.5 * (u[(i, j)] + u[(j, i)].conj()));
    let (cosines, mut vectors) = hermitian_eigen(&h)?;

    let mut phases = vec![0.0; n];
    let mut clusters: Vec<std::ops::Range<usize>> = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && cosines[end] - cosines[end - 1] < CLUSTER_GAP {
            end += 1;
        }
        if end - start == 1 {
            phases[start] = singleton_phase(u, &vectors, start, cosines[start])?;
        } else {
            clusters.push(start..end);
        }
        start = end;
    }
    if !clusters.is_empty() {
        resolve_clusters(u, &mut vectors, &clusters, &mut phases)?;
    }

    for p in &mut phases {
        *p = wrap_phase(*p);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| phases[a].total_cmp(&phases[b]));
    let sorted_phases = order.iter().map(|&k| phases[k]).collect();
    let sorted_vectors = vectors.select_columns(&order);
    Ok(SpectralDecomposition { phases: sorted_phases, vectors: sorted_vectors })
}

fn singleton_phase(u: &CMatrix, v: &CMatrix, col: usize, c: f64) -> Result<f64> {
    let x = v.column(col);
    let c = c.clamp(-1.0, 1.0);
    let s_abs = (1.0 - c * c).max(0.0).sqrt();
    if s_abs < SMALL_SINE {
        let ux = u.mul_vec(&x)?;
        let r: C64 = x.iter().zip(&ux).map(|(a, b)| a.conj() * b).sum();
        return Ok(r.arg());
    }
    let mut idx: Vec<usize> = (0..x.len()).collect();
    let k = PROBE_COMPONENTS.min(x.len());
    idx.select_nth_unstable_by(k - 1, |&a, &b| x[b].norm_sqr().total_cmp(&x[a].norm_sqr()));
    let mut num = C64::new(0.0, 0.0);
    for &i in &idx[..k] {
        num += x[i].conj() * dot(u.row(i), &x);
    }
    Ok(s_abs.copysign(num.im).atan2(c))
}

fn resolve_clusters(
    u: &CMatrix,
    vectors: &mut CMatrix,
    clusters: &[std::ops::Range<usize>],
    phases: &mut [f64],
) -> Result<()> {
    let cols: Vec<usize> = clusters.iter().flat_map(|r| r.clone()).collect();
    let vc = vectors.select_columns(&cols);
    let uvc = u.matmul(&vc)?;
    let mut offset = 0;
    for range in clusters {
        let k = range.len();
        let local: Vec<usize> = (offset..offset + k).collect();
        let basis = vc.select_columns(&local);
        let image = uvc.select_columns(&local);
        let b = basis.adjoint_mul(&image)?;
        let (t, z) = schur(&b)?;
        let rotated = basis.matmul(&z)?;
        for (a, col) in range.clone().enumerate() {
            phases[col] = t[(a, a)].arg();
            for i in 0..vectors.rows() {
                vectors[(i, col)] = rotated[(i, a)];
            }
        }
        offset += k;
    }
    Ok(())
}

/// Hermitian eigendecomposition with validation: eigenvalues ascending, vectors as columns.
pub fn eigh(h: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if !h.is_square() {
        return Err(Error::Dimension(format!("eigh needs a square matrix, got {}x{}", h.rows(), h.cols())));
    }
    let r = h.hermiticity_residual();
    if !(r <= 1e-10 * h.max_abs().max(1.0)) {
        return Err(Error::NotHermitian { residual: r });
    }
    hermitian_eigen(h)
}
