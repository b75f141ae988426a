//! Angular momentum matrices for integer spin and the single kicked top.
//!
//! Basis order is m = j, j-1, ..., -j, so index i carries m = j - i.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::linalg::{eigh, CMatrix};
use crate::{Error, Result, C64};

/// One kicked top: spin `j`, kick strength `k`, parity-breaking shift `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TopParams {
    pub j: u32,
    pub k: f64,
    pub alpha: f64,
}

impl TopParams {
    pub fn new(j: u32, k: f64, alpha: f64) -> Result<Self> {
        let p = Self { j, k, alpha };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.j == 0 {
            return Err(Error::Invalid("spin j must be at least 1".into()));
        }
        if !self.k.is_finite() || !self.alpha.is_finite() {
            return Err(Error::Invalid("kick strength and alpha must be finite".into()));
        }
        Ok(())
    }

    /// Hilbert space dimension 2j + 1.
    pub fn dim(&self) -> usize {
        2 * self.j as usize + 1
    }
}

fn check_spin(j: u32) -> Result<usize> {
    if j == 0 {
        return Err(Error::Invalid("spin j must be at least 1".into()));
    }
    Ok(2 * j as usize + 1)
}

/// Magnetic quantum numbers in basis order.
pub fn m_values(j: u32) -> Vec<f64> {
    (0..=2 * j).map(|i| j as f64 - i as f64).collect()
}

pub fn jz(j: u32) -> Result<CMatrix> {
    check_spin(j)?;
    let d: Vec<C64> = m_values(j).into_iter().map(|m| C64::new(m, 0.0)).collect();
    Ok(CMatrix::from_diagonal(&d))
}

/// Raising operator: ⟨m+1|J+|m⟩ = sqrt(j(j+1) - m(m+1)).
pub fn jplus(j: u32) -> Result<CMatrix> {
    let n = check_spin(j)?;
    let jj = j as f64 * (j as f64 + 1.0);
    let mut a = CMatrix::zeros(n, n);
    for i in 1..n {
        let m = j as f64 - i as f64;
        a[(i - 1, i)] = C64::new((jj - m * (m + 1.0)).sqrt(), 0.0);
    }
    Ok(a)
}

pub fn jminus(j: u32) -> Result<CMatrix> {
    Ok(jplus(j)?.adjoint())
}

/// (J+ + J-)/2.
pub fn jx(j: u32) -> Result<CMatrix> {
    let p = jplus(j)?;
    let n = p.rows();
    Ok(CMatrix::from_fn(n, n, |a, b| 0.5 * (p[(a, b)] + p[(b, a)].conj())))
}

/// (J+ - J-)/(2i).
pub fn jy(j: u32) -> Result<CMatrix> {
    let p = jplus(j)?;
    let n = p.rows();
    let two_i = C64::new(0.0, 2.0);
    Ok(CMatrix::from_fn(n, n, |a, b| (p[(a, b)] - p[(b, a)].conj()) / two_i))
}

/// exp(-i t H) for Hermitian H via its eigendecomposition.
pub fn rotation_exp(h: &CMatrix, t: f64) -> Result<CMatrix> {
    let (w, v) = eigh(h)?;
    let mut vd = v.clone();
    let phases: Vec<C64> = w.iter().map(|&l| C64::from_polar(1.0, -t * l)).collect();
    vd.scale_cols(&phases)?;
    vd.matmul(&v.adjoint())
}

/// Torsion phases -k (m + α)² / (2j) in basis order.
pub fn kick_phases(p: &TopParams) -> Vec<f64> {
    let j = p.j as f64;
    m_values(p.j).into_iter().map(|m| -p.k * (m + p.alpha).powi(2) / (2.0 * j)).collect()
}

/// U = exp(-i k/(2j) (Jz + α)²) exp(-i π/2 Jy): rotation first, then the kick.
pub fn top_floquet(p: &TopParams) -> Result<CMatrix> {
    p.validate()?;
    let mut u = rotation_exp(&jy(p.j)?, FRAC_PI_2)?;
    let kick: Vec<C64> = kick_phases(p).into_iter().map(|ph| C64::from_polar(1.0, ph)).collect();
    u.scale_rows(&kick)?;
    Ok(u)
}
