use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lambda::eigenbasis_diagonal;
use super::{coupling_table, sample_circular, Coupling, CouplingTable, EnsembleSpec, Symmetry};
use crate::linalg::{eig_unitary, kron, CMatrix};
use crate::numerics::{bessel_k0, erfc, integrate_1d_sqrt_start, QuadratureSpec, RngStream};
use crate::{Error, Result, C64};

/// Distribution of the normalized squared coupling elements ω.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixElementLaw {
    /// (2πω)^{-1/2} e^{-ω/2}
    PorterThomas,
    /// e^{-ω}
    Exponential,
    /// K0(√ω)/(π√ω), product of two Porter-Thomas variates
    BesselCoe,
    /// 2 K0(2√ω), product of two exponential variates
    BesselCue,
}

impl MatrixElementLaw {
    pub fn for_ensemble(symmetry: Symmetry, coupling: Coupling) -> Self {
        match (symmetry, coupling.is_product()) {
            (Symmetry::Coe, false) => Self::PorterThomas,
            (Symmetry::Cue, false) => Self::Exponential,
            (Symmetry::Coe, true) => Self::BesselCoe,
            (Symmetry::Cue, true) => Self::BesselCue,
        }
    }

    pub fn density(self, w: f64) -> Result<f64> {
        if !(w > 0.0) {
            return Err(Error::domain("omega_density", format!("requires w > 0, got {w}")));
        }
        Ok(match self {
            Self::PorterThomas => (-0.5 * w).exp() / (2.0 * PI * w).sqrt(),
            Self::Exponential => (-w).exp(),
            Self::BesselCoe => {
                let r = w.sqrt();
                bessel_k0(r)? / (PI * r)
            }
            Self::BesselCue => 2.0 * bessel_k0(2.0 * w.sqrt())?,
        })
    }

    pub fn cdf(self, w: f64) -> Result<f64> {
        if w <= 0.0 {
            return Ok(0.0);
        }
        if w.is_infinite() {
            return Ok(1.0);
        }
        Ok(match self {
            Self::PorterThomas => 1.0 - erfc((0.5 * w).sqrt()),
            Self::Exponential => -(-w).exp_m1(),
            Self::BesselCoe => {
                let x = w.sqrt();
                let spec = QuadratureSpec { relative_tolerance: 1e-11, ..QuadratureSpec::default() };
                let int = integrate_1d_sqrt_start(|t| bessel_k0(t).unwrap_or(0.0), 0.0, x, &spec)?;
                (2.0 / PI * int.value).min(1.0)
            }
            Self::BesselCue => {
                let y = 2.0 * w.sqrt();
                let spec = QuadratureSpec { relative_tolerance: 1e-11, ..QuadratureSpec::default() };
                let int = crate::numerics::integrate_1d(|t| t * bessel_k0(t).unwrap_or(0.0), 0.0, y, &spec)?;
                int.value.min(1.0)
            }
        })
    }

    /// Density of v = √ω, i.e. 2v ρ(v²); finite or logarithmic at v = 0.
    pub fn sqrt_density(self, v: f64) -> Result<f64> {
        if !(v > 0.0) {
            return Err(Error::domain("sqrt_density", format!("requires v > 0, got {v}")));
        }
        Ok(match self {
            Self::PorterThomas => (2.0 / PI).sqrt() * (-0.5 * v * v).exp(),
            Self::Exponential => 2.0 * v * (-v * v).exp(),
            Self::BesselCoe => 2.0 / PI * bessel_k0(v)?,
            Self::BesselCue => 4.0 * v * bessel_k0(2.0 * v)?,
        })
    }

    /// E[√ω].
    pub fn mean_sqrt(self) -> f64 {
        match self {
            Self::PorterThomas => (2.0 / PI).sqrt(),
            Self::Exponential => PI.sqrt() / 2.0,
            Self::BesselCoe => 2.0 / PI,
            Self::BesselCue => PI / 4.0,
        }
    }
}

pub fn omega_density(symmetry: Symmetry, coupling: Coupling, w: f64) -> Result<f64> {
    MatrixElementLaw::for_ensemble(symmetry, coupling).density(w)
}

/// Which off-diagonal elements a realization contributes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairSelection {
    /// `count` uniformly drawn ordered pairs a ≠ b (with replacement).
    Random { count: usize },
    /// Every ordered pair a ≠ b; intended for small dimensions.
    All,
}

impl Default for PairSelection {
    fn default() -> Self {
        PairSelection::Random { count: 1 }
    }
}

/// ω = |⟨a|V12|b⟩|²/ṽ² for one realization, in the eigenbasis of the sampled U1 ⊗ U2.
///
/// ṽ² is the mean squared off-diagonal element of this very realization, so the
/// `All` selection has unit sample mean.
pub fn offdiag_element_samples(spec: &EnsembleSpec, stream: RngStream, selection: PairSelection) -> Result<Vec<f64>> {
    spec.validate()?;
    let (n1, n2) = (spec.n1, spec.n2);
    let nn = n1 * n2;
    let e1 = eig_unitary(&sample_circular(spec.symmetry, n1, stream.child(0))?)?.vectors;
    let e2 = eig_unitary(&sample_circular(spec.symmetry, n2, stream.child(1))?)?.vectors;
    let table = coupling_table(spec, stream.child(2))?;
    let off_pairs = (nn * (nn - 1)) as f64;

    let mut rng = stream.child(3).rng();
    let pairs: Vec<(usize, usize)> = match selection {
        PairSelection::Random { count } => (0..count)
            .map(|_| {
                let a = rng.index(nn);
                let mut b = rng.index(nn - 1);
                if b >= a {
                    b += 1;
                }
                (a, b)
            })
            .collect(),
        PairSelection::All => (0..nn).flat_map(|a| (0..nn).filter(move |&b| b != a).map(move |b| (a, b))).collect(),
    };

    match table {
        CouplingTable::Product(v1, v2) => {
            let a = transformed(&e1, &v1)?;
            let b = transformed(&e2, &v2)?;
            let (sa, sb) = (a.hs_norm_sq(), b.hs_norm_sq());
            let da: f64 = a.diagonal().iter().map(|z| z.norm_sqr()).sum();
            let db: f64 = b.diagonal().iter().map(|z| z.norm_sqr()).sum();
            let vt2 = (sa * sb - da * db) / off_pairs;
            check_scale(vt2)?;
            Ok(pairs
                .into_iter()
                .map(|(p, q)| {
                    let (p1, p2, q1, q2) = (p / n2, p % n2, q / n2, q % n2);
                    a[(p1, q1)].norm_sqr() * b[(p2, q2)].norm_sqr() / vt2
                })
                .collect())
        }
        CouplingTable::Full(v) => {
            let vc: Vec<C64> = v.iter().map(|&x| C64::new(x, 0.0)).collect();
            let total: f64 = v.iter().map(|x| x * x).sum();
            let diag: f64 = eigenbasis_diagonal(&vc, &e1, &e2).iter().map(|z| z.norm_sqr()).sum();
            let vt2 = (total - diag) / off_pairs;
            check_scale(vt2)?;
            if selection == PairSelection::All {
                let ups = kron(&e1, &e2)?;
                let mut dv = ups.clone();
                dv.scale_rows(&vc)?;
                let g = ups.adjoint_mul(&dv)?;
                return Ok(pairs.into_iter().map(|(p, q)| g[(p, q)].norm_sqr() / vt2).collect());
            }
            Ok(pairs.into_iter().map(|(p, q)| full_element(&v, &e1, &e2, p, q).norm_sqr() / vt2).collect())
        }
    }
}

fn check_scale(vt2: f64) -> Result<()> {
    if !(vt2 > 0.0) {
        return Err(Error::Invalid("coupling has no off-diagonal weight in this basis".into()));
    }
    Ok(())
}

/// E† diag(v) E.
fn transformed(e: &CMatrix, v: &[f64]) -> Result<CMatrix> {
    let d: Vec<C64> = v.iter().map(|&x| C64::new(x, 0.0)).collect();
    let mut dv = e.clone();
    dv.scale_rows(&d)?;
    e.adjoint_mul(&dv)
}

fn full_element(v: &[f64], e1: &CMatrix, e2: &CMatrix, p: usize, q: usize) -> C64 {
    let n2 = e2.rows();
    let (p1, p2, q1, q2) = (p / n2, p % n2, q / n2, q % n2);
    let y: Vec<C64> = (0..n2).map(|k2| e2[(k2, p2)].conj() * e2[(k2, q2)]).collect();
    let mut acc = C64::new(0.0, 0.0);
    for k1 in 0..e1.rows() {
        let x = e1[(k1, p1)].conj() * e1[(k1, q1)];
        let row = &v[k1 * n2..(k1 + 1) * n2];
        let inner: C64 = row.iter().zip(&y).map(|(&a, b)| a * b).sum();
        acc += x * inner;
    }
    acc
}

/// Pools `offdiag_element_samples` over `spec.realizations`, stream r = (base_seed, r),
/// concatenated in realization order.
pub fn collect_omega_samples(spec: &EnsembleSpec, selection: PairSelection) -> Result<Vec<f64>> {
    spec.validate()?;
    let parts: Vec<Vec<f64>> = (0..spec.realizations)
        .into_par_iter()
        .map(|r| offdiag_element_samples(spec, RngStream::new(spec.base_seed, r as u64), selection))
        .collect::<Result<_>>()?;
    Ok(parts.concat())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate_semi_infinite, QuadratureSpec};

    const LAWS: [MatrixElementLaw; 4] = [
        MatrixElementLaw::PorterThomas,
        MatrixElementLaw::Exponential,
        MatrixElementLaw::BesselCoe,
        MatrixElementLaw::BesselCue,
    ];

    #[test]
    fn densities_normalized_with_unit_mean() {
        let spec = QuadratureSpec::default();
        for law in LAWS {
            // ω = x² removes the ω^{-1/2} and log singularities at the origin
            let norm = integrate_semi_infinite(
                |x| if x > 0.0 { 2.0 * x * law.density(x * x).unwrap() } else { 0.0 },
                0.0,
                &spec,
            )
            .unwrap();
            let mean = integrate_semi_infinite(
                |x| if x > 0.0 { 2.0 * x.powi(3) * law.density(x * x).unwrap() } else { 0.0 },
                0.0,
                &spec,
            )
            .unwrap();
            let msq = integrate_semi_infinite(
                |x| if x > 0.0 { 2.0 * x * x * law.density(x * x).unwrap() } else { 0.0 },
                0.0,
                &spec,
            )
            .unwrap();
            assert!((norm.value - 1.0).abs() < 1e-8, "{law:?} norm {}", norm.value);
            assert!((mean.value - 1.0).abs() < 1e-8, "{law:?} mean {}", mean.value);
            assert!((msq.value - law.mean_sqrt()).abs() < 1e-8, "{law:?} E√ω {}", msq.value);
        }
        assert!(omega_density(Symmetry::Coe, Coupling::DiagonalPhases, 0.0).is_err());
    }

    #[test]
    fn cdf_consistent_with_density() {
        for law in LAWS {
            for w in [0.01, 0.5, 2.0, 7.0] {
                let h = 1e-5 * w;
                let num = (law.cdf(w + h).unwrap() - law.cdf(w - h).unwrap()) / (2.0 * h);
                let d = law.density(w).unwrap();
                assert!((num - d).abs() < 1e-5 * d.max(1.0), "{law:?} at {w}: {num} vs {d}");
            }
            assert!((law.cdf(400.0).unwrap() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn full_selection_has_unit_mean() {
        for coupling in [Coupling::DiagonalPhases, Coupling::ProductPhases, Coupling::KickedTopV12] {
            for sym in [Symmetry::Coe, Symmetry::Cue] {
                let spec = EnsembleSpec::new(sym, coupling, 5, 3, 0.1);
                let w = offdiag_element_samples(&spec, RngStream::new(8, 1), PairSelection::All).unwrap();
                assert_eq!(w.len(), 15 * 14);
                let mean = w.iter().sum::<f64>() / w.len() as f64;
                assert!((mean - 1.0).abs() < 1e-12, "{sym:?} {coupling:?}: {mean}");
            }
        }
    }

    #[test]
    fn random_pairs_agree_with_full_table() {
        let spec = EnsembleSpec::new(Symmetry::Cue, Coupling::DiagonalPhases, 3, 4, 0.1);
        let all = offdiag_element_samples(&spec, RngStream::new(4, 4), PairSelection::All).unwrap();
        let some = offdiag_element_samples(&spec, RngStream::new(4, 4), PairSelection::Random { count: 50 }).unwrap();
        for w in some {
            assert!(all.iter().any(|v| (v - w).abs() < 1e-10 * w.max(1e-300)));
        }
    }
}
