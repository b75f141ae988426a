use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{sample_circular, Coupling, EnsembleSpec, Symmetry};
use crate::coupled_tops::chi;
use crate::linalg::{eig_unitary, CMatrix};
use crate::numerics::{sine_integral, RngStream};
use crate::{Error, Result, C64};

/// |tr U12|² and the squared Hilbert-Schmidt norms of the two partial traces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceTriple {
    pub trace_sq: f64,
    pub norm1_sq: f64,
    pub norm2_sq: f64,
}

/// Traces of a diagonal coupling given as its diagonal, composite index j * n2 + k.
pub fn partial_trace_norms(diag: &[C64], n1: usize, n2: usize) -> Result<TraceTriple> {
    if diag.len() != n1 * n2 {
        return Err(Error::Dimension(format!("{} diagonal entries for {n1}x{n2}", diag.len())));
    }
    let mut p1 = vec![C64::new(0.0, 0.0); n1];
    let mut p2 = vec![C64::new(0.0, 0.0); n2];
    for j in 0..n1 {
        for k in 0..n2 {
            let z = diag[j * n2 + k];
            p1[j] += z;
            p2[k] += z;
        }
    }
    let tr: C64 = p1.iter().sum();
    Ok(TraceTriple {
        trace_sq: tr.norm_sqr(),
        norm1_sq: p1.iter().map(|z| z.norm_sqr()).sum(),
        norm2_sq: p2.iter().map(|z| z.norm_sqr()).sum(),
    })
}

/// Ensemble-averaged transition parameter for a given set of coupling traces.
pub fn lambda_from_traces(symmetry: Symmetry, n1: usize, n2: usize, t: &TraceTriple) -> f64 {
    let (a, b) = (n1 as f64, n2 as f64);
    let nn = a * b;
    match symmetry {
        Symmetry::Coe => {
            nn / (4.0 * PI * PI * (nn - 1.0) * (a + 2.0) * (b + 2.0))
                * (nn * (nn + 2.0 * (a + b)) - 2.0 * t.norm1_sq - 2.0 * t.norm2_sq - t.trace_sq)
        }
        Symmetry::Cue => {
            nn / (4.0 * PI * PI * (nn - 1.0) * (a + 1.0) * (b + 1.0))
                * (nn * (nn + a + b) - t.norm1_sq - t.norm2_sq - t.trace_sq)
        }
    }
}

/// Equal-dimension form of the same expression, written in normalized traces.
pub fn lambda_from_traces_equal_dim(symmetry: Symmetry, n: usize, t: &TraceTriple) -> f64 {
    let nf = n as f64;
    let n2 = nf * nf;
    let (r1, r2, rt) = (t.norm1_sq / n2, t.norm2_sq / n2, t.trace_sq / n2);
    match symmetry {
        Symmetry::Coe => {
            n2 * n2 / (4.0 * PI * PI * (n2 - 1.0) * (nf + 2.0).powi(2)) * (n2 + 4.0 * nf - 2.0 * r1 - 2.0 * r2 - rt)
        }
        Symmetry::Cue => n2 * n2 / (4.0 * PI * PI * (n2 - 1.0) * (nf + 1.0).powi(2)) * (n2 + 2.0 * nf - r1 - r2 - rt),
    }
}

/// Supremum of the transition parameter: all three traces vanish.
pub fn lambda_max(symmetry: Symmetry, n1: usize, n2: usize) -> f64 {
    lambda_from_traces(symmetry, n1, n2, &TraceTriple { trace_sq: 0.0, norm1_sq: 0.0, norm2_sq: 0.0 })
}

/// Transition parameter of a diagonal unitary coupling.
pub fn lambda_general(symmetry: Symmetry, u12: &CMatrix, n1: usize, n2: usize) -> Result<f64> {
    if !u12.is_square() || u12.rows() != n1 * n2 {
        return Err(Error::Dimension(format!(
            "coupling is {}x{}, expected {} for {n1}x{n2}",
            u12.rows(),
            u12.cols(),
            n1 * n2
        )));
    }
    let off = u12.max_offdiag_abs();
    if off > 1e-12 {
        return Err(Error::NotDiagonal { residual: off });
    }
    let diag = u12.diagonal();
    let dev = diag.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max);
    if dev > 1e-10 {
        return Err(Error::NotUnitary { residual: dev });
    }
    Ok(lambda_from_traces(symmetry, n1, n2, &partial_trace_norms(&diag, n1, n2)?))
}

fn sinc_sq(eps: f64) -> f64 {
    if eps == 0.0 {
        1.0
    } else {
        let x = PI * eps;
        (x.sin() / x).powi(2)
    }
}

/// Ensemble-averaged traces for product phases 2π ξ_j ξ'_k.
pub fn product_phase_traces(n1: usize, n2: usize, eps: f64) -> TraceTriple {
    let (a, b) = (n1 as f64, n2 as f64);
    let nn = a * b;
    let x = eps * PI;
    let (g, h) = if x.abs() < 1e-4 {
        // 2χ(x)/x² and (2/x) Si(x/2) at small x
        (1.0 - x * x / 36.0, 1.0 - x * x / 72.0)
    } else {
        (2.0 * chi(x) / (x * x), 2.0 * sine_integral(0.5 * x) / x)
    };
    TraceTriple {
        trace_sq: nn * (1.0 + (a + b - 2.0) * g + (a - 1.0) * (b - 1.0) * h * h),
        norm1_sq: nn * (1.0 + (b - 1.0) * g),
        norm2_sq: nn * (1.0 + (a - 1.0) * g),
    }
}

/// Leading small-ε behaviour of the product-phase ensemble.
pub fn lambda_product_small_eps(symmetry: Symmetry, n1: usize, n2: usize, eps: f64) -> f64 {
    let (a, b) = (n1 as f64, n2 as f64);
    let nn = a * b;
    match symmetry {
        Symmetry::Coe => {
            eps * eps / 144.0 * nn * nn * ((a + 2.0) * (b + 2.0) - 9.0) / ((nn - 1.0) * (a + 2.0) * (b + 2.0))
        }
        Symmetry::Cue => {
            eps * eps / 144.0 * nn * nn * ((a + 1.0) * (b + 1.0) - 4.0) / ((nn - 1.0) * (a + 1.0) * (b + 1.0))
        }
    }
}

/// Closed-form ensemble-averaged Λ(ε) for the transition ensemble in `spec`.
pub fn lambda_ensemble_closed_form(spec: &EnsembleSpec) -> Result<f64> {
    spec.validate()?;
    let (n1, n2, eps) = (spec.n1, spec.n2, spec.epsilon);
    let (a, b) = (n1 as f64, n2 as f64);
    let nn = a * b;
    Ok(match spec.coupling {
        Coupling::DiagonalPhases => {
            let bracket = 1.0 - sinc_sq(eps);
            match spec.symmetry {
                Symmetry::Coe => {
                    nn * nn / (4.0 * PI * PI * (a + 2.0) * (b + 2.0)) * ((a + 2.0) * (b + 2.0) - 9.0) / (nn - 1.0)
                        * bracket
                }
                Symmetry::Cue => {
                    nn * nn / (4.0 * PI * PI * (a + 1.0) * (b + 1.0)) * ((a + 1.0) * (b + 1.0) - 4.0) / (nn - 1.0)
                        * bracket
                }
            }
        }
        Coupling::ProductPhases => lambda_from_traces(spec.symmetry, n1, n2, &product_phase_traces(n1, n2, eps)),
        Coupling::KickedTopV12 => {
            let (j1, j2) = spec.spins()?;
            let t = crate::coupled_tops::kicked_top_traces(j1, j2, eps);
            lambda_from_traces(spec.symmetry, n1, n2, &t)
        }
    })
}

/// Monte-Carlo estimate of v²/D² for a fixed diagonal coupling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloLambda {
    pub mean: f64,
    pub std_error: f64,
    pub realizations: usize,
}

/// Mean squared off-diagonal element of `u12` in the eigenbasis of sampled U1 ⊗ U2,
/// divided by D² = (2π/(n1 n2))², averaged over `realizations` independent pairs.
pub fn monte_carlo_lambda(
    symmetry: Symmetry,
    u12_diag: &[C64],
    n1: usize,
    n2: usize,
    realizations: usize,
    seed: u64,
) -> Result<MonteCarloLambda> {
    if u12_diag.len() != n1 * n2 {
        return Err(Error::Dimension(format!("{} diagonal entries for {n1}x{n2}", u12_diag.len())));
    }
    if realizations < 2 {
        return Err(Error::Invalid("need at least two realizations for a standard error".into()));
    }
    let nn = (n1 * n2) as f64;
    let d = 2.0 * PI / nn;
    let values: Vec<f64> = (0..realizations)
        .into_par_iter()
        .map(|r| -> Result<f64> {
            let stream = RngStream::new(seed, r as u64);
            let e1 = eig_unitary(&sample_circular(symmetry, n1, stream.child(0))?)?.vectors;
            let e2 = eig_unitary(&sample_circular(symmetry, n2, stream.child(1))?)?.vectors;
            let diag_sq = eigenbasis_diagonal_sq(u12_diag, &e1, &e2);
            let v2 = (nn - diag_sq) / (nn * (nn - 1.0));
            Ok(v2 / (d * d))
        })
        .collect::<Result<_>>()?;
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
    Ok(MonteCarloLambda { mean, std_error: (var / m).sqrt(), realizations })
}

/// Σ_i |Γ_ii|² for Γ = (E1⊗E2)† diag(u) (E1⊗E2), using Γ_ii = (P1ᵀ T P2)_{i1 i2} with P = |E|².
pub(crate) fn eigenbasis_diagonal_sq(u: &[C64], e1: &CMatrix, e2: &CMatrix) -> f64 {
    let gamma = eigenbasis_diagonal(u, e1, e2);
    gamma.iter().map(|z| z.norm_sqr()).sum()
}

pub(crate) fn eigenbasis_diagonal(u: &[C64], e1: &CMatrix, e2: &CMatrix) -> Vec<C64> {
    let (n1, n2) = (e1.rows(), e2.rows());
    let p1: Vec<f64> = e1.as_slice().iter().map(|z| z.norm_sqr()).collect();
    let p2: Vec<f64> = e2.as_slice().iter().map(|z| z.norm_sqr()).collect();
    // tmp[k1][i2] = Σ_k2 T[k1,k2] P2[k2,i2]
    let mut tmp = vec![C64::new(0.0, 0.0); n1 * n2];
    for k1 in 0..n1 {
        for k2 in 0..n2 {
            let t = u[k1 * n2 + k2];
            let row = &p2[k2 * n2..(k2 + 1) * n2];
            for (o, &p) in tmp[k1 * n2..(k1 + 1) * n2].iter_mut().zip(row) {
                *o += t * p;
            }
        }
    }
    let mut out = vec![C64::new(0.0, 0.0); n1 * n2];
    for k1 in 0..n1 {
        for i1 in 0..n1 {
            let p = p1[k1 * n1 + i1];
            for (o, &t) in out[i1 * n2..(i1 + 1) * n2].iter_mut().zip(&tmp[k1 * n2..(k1 + 1) * n2]) {
                *o += p * t;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> C64 {
        C64::new(1.0, 0.0)
    }

    #[test]
    fn identity_coupling_vanishes() {
        for (n1, n2) in [(2, 2), (3, 7), (6, 12)] {
            let id = CMatrix::identity(n1 * n2);
            for s in [Symmetry::Coe, Symmetry::Cue] {
                assert!(lambda_general(s, &id, n1, n2).unwrap().abs() < 1e-12);
            }
            let t = partial_trace_norms(&vec![one(); n1 * n2], n1, n2).unwrap();
            let nn = (n1 * n2) as f64;
            assert_eq!(t.trace_sq, nn * nn);
            assert_eq!(t.norm1_sq, n1 as f64 * (n2 * n2) as f64);
            assert_eq!(t.norm2_sq, n2 as f64 * (n1 * n1) as f64);
        }
    }

    #[test]
    fn two_by_two_hand_value() {
        let u = CMatrix::from_diagonal(&[one(), one(), one(), -one()]);
        let t = partial_trace_norms(&u.diagonal(), 2, 2).unwrap();
        assert_eq!((t.trace_sq, t.norm1_sq, t.norm2_sq), (4.0, 4.0, 4.0));
        // 4/(4π²·3·16) · (4·12 − 8 − 8 − 4)
        let want = 7.0 / (12.0 * PI * PI);
        assert!((lambda_general(Symmetry::Coe, &u, 2, 2).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_diagonal() {
        let mut u = CMatrix::identity(4);
        u[(0, 3)] = C64::new(0.1, 0.0);
        assert!(matches!(lambda_general(Symmetry::Coe, &u, 2, 2), Err(Error::NotDiagonal { .. })));
    }

    #[test]
    fn equal_dimension_form_agrees() {
        let mut r = RngStream::new(9, 0).rng();
        for n in [3, 8, 20] {
            let d: Vec<C64> = (0..n * n).map(|_| C64::from_polar(1.0, 3.0 * r.uniform())).collect();
            let t = partial_trace_norms(&d, n, n).unwrap();
            for s in [Symmetry::Coe, Symmetry::Cue] {
                let a = lambda_from_traces(s, n, n, &t);
                let b = lambda_from_traces_equal_dim(s, n, &t);
                assert!((a - b).abs() < 1e-10 * a.abs().max(1.0));
            }
        }
    }

    #[test]
    fn product_closed_form_limits() {
        let t = product_phase_traces(5, 7, 0.0);
        assert!((t.trace_sq - 35.0f64.powi(2)).abs() < 1e-9);
        for s in [Symmetry::Coe, Symmetry::Cue] {
            for eps in [0.01, 0.03, 0.05] {
                let spec = EnsembleSpec::new(s, Coupling::ProductPhases, 20, 20, eps);
                let full = lambda_ensemble_closed_form(&spec).unwrap();
                let small = lambda_product_small_eps(s, 20, 20, eps);
                assert!(((full - small) / small).abs() < 0.01, "{s:?} {eps}: {full} vs {small}");
            }
        }
    }

    #[test]
    fn diagonal_closed_form_at_unit_eps() {
        let (a, b) = (6.0f64, 9.0f64);
        let spec = EnsembleSpec::new(Symmetry::Coe, Coupling::DiagonalPhases, 6, 9, 1.0);
        let want =
            (a * b).powi(2) * ((a + 2.0) * (b + 2.0) - 9.0) / (4.0 * PI * PI * (a + 2.0) * (b + 2.0) * (a * b - 1.0));
        assert!((lambda_ensemble_closed_form(&spec).unwrap() - want).abs() < 1e-12 * want);
    }

    #[test]
    fn eigenbasis_diagonal_matches_dense() {
        let (n1, n2) = (3, 4);
        let e1 = crate::rmt::sample_cue(n1, RngStream::new(1, 0)).unwrap();
        let e2 = crate::rmt::sample_cue(n2, RngStream::new(1, 1)).unwrap();
        let mut r = RngStream::new(2, 0).rng();
        let d: Vec<C64> = (0..n1 * n2).map(|_| C64::from_polar(1.0, 6.0 * r.uniform())).collect();
        let ups = crate::linalg::kron(&e1, &e2).unwrap();
        let mut du = ups.clone();
        du.scale_rows(&d).unwrap();
        let g = ups.adjoint_mul(&du).unwrap();
        let fast = eigenbasis_diagonal(&d, &e1, &e2);
        for i in 0..n1 * n2 {
            assert!((fast[i] - g[(i, i)]).norm() < 1e-13);
        }
    }
}
