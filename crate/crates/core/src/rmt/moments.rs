use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{sample_circular, Symmetry};
use crate::linalg::eig_unitary;
use crate::numerics::{MeanEstimate, RngStream};
use crate::{Error, Result};

/// Fourth moments of eigenvector components over independent draws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourthMoments {
    /// ⟨|E_ik|⁴⟩
    pub same: MeanEstimate,
    /// ⟨|E_ik|² |E_il|²⟩ for k ≠ l
    pub cross: MeanEstimate,
}

/// Ensemble values (same, cross) of the fourth moments.
pub fn fourth_moment_reference(symmetry: Symmetry, n: usize) -> (f64, f64) {
    let n = n as f64;
    match symmetry {
        Symmetry::Coe => (3.0 / (n * (n + 2.0)), 1.0 / (n * (n + 2.0))),
        Symmetry::Cue => (2.0 / (n * (n + 1.0)), 1.0 / (n * (n + 1.0))),
    }
}

/// Samples `draws` matrices and averages eigenvector fourth moments per draw.
pub fn eigenvector_fourth_moments(symmetry: Symmetry, n: usize, draws: usize, base_seed: u64) -> Result<FourthMoments> {
    if n < 2 || draws < 2 {
        return Err(Error::Invalid("need n >= 2 and at least two draws".into()));
    }
    let per_draw: Vec<(f64, f64)> = (0..draws)
        .into_par_iter()
        .map(|d| {
            let u = sample_circular(symmetry, n, RngStream::new(base_seed, d as u64))?;
            let e = eig_unitary(&u)?.vectors;
            let (mut same, mut cross) = (0.0, 0.0);
            for i in 0..n {
                let row: Vec<f64> = e.row(i).iter().map(|z| z.norm_sqr()).collect();
                let s: f64 = row.iter().sum();
                let q: f64 = row.iter().map(|x| x * x).sum();
                same += q;
                cross += s * s - q;
            }
            let nf = n as f64;
            Ok((same / (nf * nf), cross / (nf * nf * (nf - 1.0))))
        })
        .collect::<Result<_>>()?;
    let same: Vec<f64> = per_draw.iter().map(|p| p.0).collect();
    let cross: Vec<f64> = per_draw.iter().map(|p| p.1).collect();
    Ok(FourthMoments { same: MeanEstimate::from_samples(&same)?, cross: MeanEstimate::from_samples(&cross)? })
}
