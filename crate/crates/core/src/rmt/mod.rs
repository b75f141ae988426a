//! Circular ensembles, random-matrix transition ensembles and their transition parameter.

mod lambda;
mod moments;
mod omega;
mod sampling;

use serde::{Deserialize, Serialize};

pub use lambda::{
    lambda_ensemble_closed_form, lambda_from_traces, lambda_from_traces_equal_dim, lambda_general, lambda_max,
    lambda_product_small_eps, monte_carlo_lambda, partial_trace_norms, product_phase_traces, MonteCarloLambda,
    TraceTriple,
};
pub use moments::{eigenvector_fourth_moments, fourth_moment_reference, FourthMoments};
pub use omega::{collect_omega_samples, offdiag_element_samples, omega_density, MatrixElementLaw, PairSelection};
pub use sampling::{sample_coe, sample_cue};

use crate::linalg::{kron, CMatrix};
use crate::numerics::RngStream;
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    Coe,
    Cue,
}

/// Diagonal coupling V12 of a transition ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coupling {
    /// 2π ξ_jk, independent uniform ξ on [-1/2, 1/2].
    DiagonalPhases,
    /// 2π ξ_j ξ'_k.
    ProductPhases,
    /// m1 m2 / sqrt(j1 j2) of the coupled tops; needs odd dimensions.
    KickedTopV12,
}

impl Coupling {
    /// Whether V12 factorizes as V1 ⊗ V2.
    pub fn is_product(self) -> bool {
        !matches!(self, Coupling::DiagonalPhases)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub symmetry: Symmetry,
    pub coupling: Coupling,
    pub n1: usize,
    pub n2: usize,
    pub epsilon: f64,
    pub realizations: usize,
    pub base_seed: u64,
}

impl EnsembleSpec {
    pub fn new(symmetry: Symmetry, coupling: Coupling, n1: usize, n2: usize, epsilon: f64) -> Self {
        Self { symmetry, coupling, n1, n2, epsilon, realizations: 1, base_seed: 0 }
    }

    pub fn with_realizations(mut self, realizations: usize, base_seed: u64) -> Self {
        self.realizations = realizations;
        self.base_seed = base_seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n1 < 2 || self.n2 < 2 {
            return Err(Error::Invalid(format!("dimensions must be at least 2, got {}x{}", self.n1, self.n2)));
        }
        if self.realizations < 1 {
            return Err(Error::Invalid("at least one realization required".into()));
        }
        if !(self.epsilon >= 0.0) || !self.epsilon.is_finite() {
            return Err(Error::Invalid(format!("epsilon must be finite and non-negative, got {}", self.epsilon)));
        }
        if self.coupling == Coupling::KickedTopV12 {
            self.spins()?;
        }
        Ok(())
    }

    /// Spins (j1, j2) for the kicked-top coupling.
    pub fn spins(&self) -> Result<(u32, u32)> {
        if self.n1 % 2 == 0 || self.n2 % 2 == 0 {
            return Err(Error::Invalid(format!(
                "kicked-top coupling needs odd dimensions, got {}x{}",
                self.n1, self.n2
            )));
        }
        Ok(((self.n1 / 2) as u32, (self.n2 / 2) as u32))
    }
}

/// Draws from the COE or CUE.
pub fn sample_circular(symmetry: Symmetry, n: usize, stream: RngStream) -> Result<CMatrix> {
    match symmetry {
        Symmetry::Coe => sample_coe(n, stream),
        Symmetry::Cue => sample_cue(n, stream),
    }
}

/// Either a full table of V12 diagonal entries or its two factors.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum CouplingTable {
    Full(Vec<f64>),
    Product(Vec<f64>, Vec<f64>),
}

impl CouplingTable {
    fn diagonal(&self) -> Vec<f64> {
        match self {
            CouplingTable::Full(v) => v.clone(),
            CouplingTable::Product(a, b) => a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect(),
        }
    }
}

pub(crate) fn coupling_table(spec: &EnsembleSpec, stream: RngStream) -> Result<CouplingTable> {
    spec.validate()?;
    let mut rng = stream.rng();
    let two_pi = 2.0 * std::f64::consts::PI;
    Ok(match spec.coupling {
        Coupling::DiagonalPhases => {
            CouplingTable::Full((0..spec.n1 * spec.n2).map(|_| two_pi * rng.uniform()).collect())
        }
        Coupling::ProductPhases => {
            let a = (0..spec.n1).map(|_| two_pi * rng.uniform()).collect();
            let b = (0..spec.n2).map(|_| rng.uniform()).collect();
            CouplingTable::Product(a, b)
        }
        Coupling::KickedTopV12 => {
            let (j1, j2) = spec.spins()?;
            let s = ((j1 as f64) * (j2 as f64)).sqrt();
            let a = crate::spin::m_values(j1).into_iter().map(|m| m / s).collect();
            let b = crate::spin::m_values(j2);
            CouplingTable::Product(a, b)
        }
    })
}

/// Diagonal entries of V12 (real), composite index j * n2 + k.
pub fn coupling_diagonal(spec: &EnsembleSpec, stream: RngStream) -> Result<Vec<f64>> {
    Ok(coupling_table(spec, stream)?.diagonal())
}

/// V12 as a diagonal matrix.
pub fn build_coupling(spec: &EnsembleSpec, stream: RngStream) -> Result<CMatrix> {
    let d: Vec<C64> = coupling_diagonal(spec, stream)?.into_iter().map(|v| C64::new(v, 0.0)).collect();
    Ok(CMatrix::from_diagonal(&d))
}

/// One member exp(iεV12)(U1 ⊗ U2) of the transition ensemble.
pub fn sample_transition_operator(spec: &EnsembleSpec, stream: RngStream) -> Result<CMatrix> {
    let u1 = sample_circular(spec.symmetry, spec.n1, stream.child(0))?;
    let u2 = sample_circular(spec.symmetry, spec.n2, stream.child(1))?;
    let v = coupling_diagonal(spec, stream.child(2))?;
    let mut u = kron(&u1, &u2)?;
    let phases: Vec<C64> = v.iter().map(|&x| C64::from_polar(1.0, spec.epsilon * x)).collect();
    u.scale_rows(&phases)?;
    Ok(u)
}
