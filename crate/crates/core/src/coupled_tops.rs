//! Coupled kicked tops: the bipartite Floquet operator and its transition parameter.

use serde::{Deserialize, Serialize};

use crate::linalg::{eig_unitary, kron, wrap_phase, CMatrix, SpectralDecomposition};
use crate::numerics::{first_crossing, sine_integral};
use crate::rmt::{lambda_from_traces, lambda_max, Symmetry, TraceTriple};
use crate::spin::{m_values, top_floquet, TopParams};
use crate::{Error, Result, C64};

pub const DEFAULT_K1: f64 = 12.0;
pub const DEFAULT_K2: f64 = 15.0;
pub const DEFAULT_ALPHA1: f64 = 0.35;
pub const DEFAULT_ALPHA2: f64 = 0.4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoupledTopParams {
    pub top1: TopParams,
    pub top2: TopParams,
    pub epsilon: f64,
}

impl CoupledTopParams {
    pub fn new(top1: TopParams, top2: TopParams, epsilon: f64) -> Result<Self> {
        let p = Self { top1, top2, epsilon };
        p.validate()?;
        Ok(p)
    }

    /// Kick strengths 12 and 15, shifts 0.35 and 0.4.
    pub fn with_default_kicks(j1: u32, j2: u32, epsilon: f64) -> Result<Self> {
        Self::new(
            TopParams::new(j1, DEFAULT_K1, DEFAULT_ALPHA1)?,
            TopParams::new(j2, DEFAULT_K2, DEFAULT_ALPHA2)?,
            epsilon,
        )
    }

    pub fn validate(&self) -> Result<()> {
        self.top1.validate()?;
        self.top2.validate()?;
        if !(self.epsilon >= 0.0) || !self.epsilon.is_finite() {
            return Err(Error::Invalid(format!("epsilon must be finite and non-negative, got {}", self.epsilon)));
        }
        Ok(())
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.top1.dim(), self.top2.dim())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaMethod {
    ExactSum,
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaReport {
    pub lambda: f64,
    pub trace_sq: f64,
    pub norm1_sq: f64,
    pub norm2_sq: f64,
    pub method: LambdaMethod,
}

/// Diagonal of V12 = Jz1 Jz2 / sqrt(j1 j2), composite index i1 * N2 + i2.
pub fn coupling_v12_diagonal(j1: u32, j2: u32) -> Vec<f64> {
    let s = (j1 as f64 * j2 as f64).sqrt();
    let m2 = m_values(j2);
    m_values(j1).into_iter().flat_map(|a| m2.iter().map(move |b| a * b / s)).collect()
}

pub fn coupling_v12(j1: u32, j2: u32) -> Result<CMatrix> {
    if j1 == 0 || j2 == 0 {
        return Err(Error::Invalid("spins must be at least 1".into()));
    }
    let d: Vec<C64> = coupling_v12_diagonal(j1, j2).into_iter().map(|v| C64::new(v, 0.0)).collect();
    Ok(CMatrix::from_diagonal(&d))
}

/// U = exp(iε V12) (U1 ⊗ U2).
pub fn full_floquet(p: &CoupledTopParams) -> Result<CMatrix> {
    p.validate()?;
    let mut u = kron(&top_floquet(&p.top1)?, &top_floquet(&p.top2)?)?;
    if p.epsilon != 0.0 {
        let phases: Vec<C64> = coupling_v12_diagonal(p.top1.j, p.top2.j)
            .into_iter()
            .map(|v| C64::from_polar(1.0, p.epsilon * v))
            .collect();
        u.scale_rows(&phases)?;
    }
    Ok(u)
}

/// Member `r` of a pooled set of spectra: both shifts α are moved by 0.1·r.
pub fn realization_params(base: &CoupledTopParams, r: usize) -> CoupledTopParams {
    let mut p = *base;
    p.top1.alpha += 0.1 * r as f64;
    p.top2.alpha += 0.1 * r as f64;
    p
}

/// Eigenphases and eigenvectors of the coupled Floquet operator.
///
/// At ε = 0 the operator is exactly U1 ⊗ U2 and the spectrum is assembled from the
/// single-top decompositions.
pub fn floquet_spectrum(p: &CoupledTopParams) -> Result<SpectralDecomposition> {
    p.validate()?;
    if p.epsilon == 0.0 {
        let a = eig_unitary(&top_floquet(&p.top1)?)?;
        let b = eig_unitary(&top_floquet(&p.top2)?)?;
        return product_spectrum(&a, &b);
    }
    eig_unitary(&full_floquet(p)?)
}

/// Spectral decomposition of A ⊗ B from those of A and B.
pub fn product_spectrum(a: &SpectralDecomposition, b: &SpectralDecomposition) -> Result<SpectralDecomposition> {
    let phases: Vec<f64> = a.phases.iter().flat_map(|&x| b.phases.iter().map(move |&y| wrap_phase(x + y))).collect();
    let vectors = kron(&a.vectors, &b.vectors)?;
    let mut order: Vec<usize> = (0..phases.len()).collect();
    order.sort_by(|&i, &j| phases[i].total_cmp(&phases[j]));
    Ok(SpectralDecomposition {
        phases: order.iter().map(|&i| phases[i]).collect(),
        vectors: vectors.select_columns(&order),
    })
}

/// Exact traces of U12 = exp(iε V12).
///
/// With β = ε/sqrt(j1 j2) both partial traces are real row sums
/// r1(m1) = Σ_{m2} cos(β m1 m2), r2(m2) = Σ_{m1} cos(β m1 m2); cost O(N1 N2).
pub fn kicked_top_traces(j1: u32, j2: u32, epsilon: f64) -> TraceTriple {
    let beta = epsilon / (j1 as f64 * j2 as f64).sqrt();
    let m1 = m_values(j1);
    let m2 = m_values(j2);
    let mut r1 = vec![0.0; m1.len()];
    let mut r2 = vec![0.0; m2.len()];
    for (a, &x) in m1.iter().enumerate() {
        for (b, &y) in m2.iter().enumerate() {
            let c = (beta * x * y).cos();
            r1[a] += c;
            r2[b] += c;
        }
    }
    let tr: f64 = r1.iter().sum();
    TraceTriple {
        trace_sq: tr * tr,
        norm1_sq: r1.iter().map(|v| v * v).sum(),
        norm2_sq: r2.iter().map(|v| v * v).sum(),
    }
}

/// χ(x) = x Si(x) + cos x − 1, with its Taylor series near 0.
pub(crate) fn chi(x: f64) -> f64 {
    if x.abs() < 0.1 {
        let x2 = x * x;
        x2 * (0.5 - x2 / 72.0 + x2 * x2 / 3600.0)
    } else {
        x * sine_integral(x) + x.cos() - 1.0
    }
}

/// Integral approximations to the traces, valid for large spins.
pub fn kicked_top_traces_asymptotic(j1: u32, j2: u32, epsilon: f64) -> TraceTriple {
    let (n1, n2) = ((2 * j1 + 1) as f64, (2 * j2 + 1) as f64);
    if epsilon == 0.0 {
        return TraceTriple { trace_sq: (n1 * n2).powi(2), norm1_sq: n1 * n2 * n2, norm2_sq: n1 * n1 * n2 };
    }
    let jj = j1 as f64 * j2 as f64;
    let kappa = epsilon * n1 * n2 / (2.0 * jj.sqrt());
    let t = 4.0 * jj.sqrt() / epsilon * sine_integral(0.5 * kappa);
    let c = 8.0 * jj / (epsilon * epsilon) * chi(kappa);
    TraceTriple { trace_sq: t * t, norm1_sq: c / n1, norm2_sq: c / n2 }
}

/// Transition parameter of the coupled tops from the COE expression.
pub fn lambda_kicked_tops(p: &CoupledTopParams, method: LambdaMethod) -> Result<LambdaReport> {
    p.validate()?;
    Ok(lambda_for_spins(p.top1.j, p.top2.j, p.epsilon, method))
}

pub fn lambda_for_spins(j1: u32, j2: u32, epsilon: f64, method: LambdaMethod) -> LambdaReport {
    let t = match method {
        LambdaMethod::ExactSum => kicked_top_traces(j1, j2, epsilon),
        LambdaMethod::Asymptotic => kicked_top_traces_asymptotic(j1, j2, epsilon),
    };
    let (n1, n2) = (2 * j1 as usize + 1, 2 * j2 as usize + 1);
    LambdaReport {
        lambda: lambda_from_traces(Symmetry::Coe, n1, n2, &t).max(0.0),
        trace_sq: t.trace_sq,
        norm1_sq: t.norm1_sq,
        norm2_sq: t.norm2_sq,
        method,
    }
}

/// Saturation value of Λ for the coupled tops.
pub fn lambda_max_tops(j1: u32, j2: u32) -> f64 {
    lambda_max(Symmetry::Coe, 2 * j1 as usize + 1, 2 * j2 as usize + 1)
}

/// Coupling strength on the first rising branch of the exact Λ(ε) that gives `target`.
pub fn epsilon_for_lambda(j1: u32, j2: u32, target: f64) -> Result<f64> {
    if j1 == 0 || j2 == 0 {
        return Err(Error::Invalid("spins must be at least 1".into()));
    }
    if !(target >= 0.0) || !target.is_finite() {
        return Err(Error::Invalid(format!("target Λ must be finite and non-negative, got {target}")));
    }
    let lmax = lambda_max_tops(j1, j2);
    if target >= lmax {
        return Err(Error::OutOfRange { target, maximum: lmax });
    }
    if target == 0.0 {
        return Ok(0.0);
    }
    let jj = (j1 as f64 * j2 as f64).sqrt();
    let nn = ((2 * j1 + 1) * (2 * j2 + 1)) as f64;
    // κ = ε N1 N2 / (2 sqrt(j1 j2)) sets the scale on which Λ(ε) varies
    let eps_scale = 2.0 * jj / nn;
    first_crossing(
        |e| lambda_for_spins(j1, j2, e, LambdaMethod::ExactSum).lambda,
        target,
        eps_scale / 20.0,
        2.0 * std::f64::consts::PI * jj,
        1e-10 * lmax,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn v12_spin_one() {
        assert_eq!(coupling_v12_diagonal(1, 1), vec![1.0, 0.0, -1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0]);
        for (j1, j2) in [(2, 3), (5, 1)] {
            let d = coupling_v12_diagonal(j1, j2);
            assert!(d.iter().sum::<f64>().abs() < 1e-12);
            let s = |j: f64| j * (j + 1.0) * (2.0 * j + 1.0) / 3.0;
            let want = s(j1 as f64) * s(j2 as f64) / (j1 as f64 * j2 as f64);
            assert!((d.iter().map(|v| v * v).sum::<f64>() - want).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_coupling_spectrum_is_product() {
        let p = CoupledTopParams::with_default_kicks(3, 4, 0.0).unwrap();
        let fast = floquet_spectrum(&p).unwrap();
        let dense = eig_unitary(&full_floquet(&p).unwrap()).unwrap();
        for (a, b) in fast.phases.iter().zip(&dense.phases) {
            assert!((a - b).abs() < 1e-10);
        }
        assert!(fast.residual(&full_floquet(&p).unwrap()).unwrap() < 1e-10);
    }

    #[test]
    fn floquet_unitary_and_consistent() {
        let p = CoupledTopParams::with_default_kicks(6, 5, 0.3).unwrap();
        let u = full_floquet(&p).unwrap();
        assert!(u.unitarity_residual().unwrap() < 1e-12);
        let d = floquet_spectrum(&p).unwrap();
        assert!(d.residual(&u).unwrap() < 1e-10);
    }

    #[test]
    fn lambda_limits() {
        let r = lambda_for_spins(20, 20, 0.0, LambdaMethod::ExactSum);
        assert_eq!(r.lambda, 0.0);
        assert_eq!(r.trace_sq, 41.0f64.powi(4));
        let lmax = lambda_max_tops(20, 20);
        let want = 41.0f64.powi(4) * (41.0 * 41.0 + 4.0 * 41.0) / (4.0 * PI * PI * (41.0 * 41.0 - 1.0) * 43.0 * 43.0);
        assert!((lmax - want).abs() < 1e-12 * want);
        let big = lambda_for_spins(20, 20, 2000.0, LambdaMethod::Asymptotic).lambda;
        assert!((big - lmax).abs() < 0.01 * lmax);
    }

    #[test]
    fn exact_and_asymptotic_agree_at_small_coupling() {
        for eps in [1e-3, 5e-3, 1e-2] {
            let a = lambda_for_spins(30, 30, eps, LambdaMethod::ExactSum).lambda;
            let b = lambda_for_spins(30, 30, eps, LambdaMethod::Asymptotic).lambda;
            assert!(((a - b) / a).abs() < 0.01, "{eps}: {a} vs {b}");
        }
    }

    #[test]
    fn inverse_round_trip() {
        let lmax = lambda_max_tops(20, 20);
        for target in [0.1, 1.0, 8.0] {
            let e = epsilon_for_lambda(20, 20, target).unwrap();
            let l = lambda_for_spins(20, 20, e, LambdaMethod::ExactSum).lambda;
            assert!((l - target).abs() < 1e-10 * lmax, "{target}: {l}");
        }
        assert_eq!(epsilon_for_lambda(20, 20, 0.0).unwrap(), 0.0);
        assert!(matches!(epsilon_for_lambda(20, 20, 225.0), Err(Error::OutOfRange { .. })));
        assert!(epsilon_for_lambda(30, 30, 0.25).unwrap() > epsilon_for_lambda(50, 50, 0.25).unwrap());
    }
}
