//! Numerical laboratory for coupled kicked tops and random-matrix transition
//! ensembles.
//!
//! The crate builds bipartite Floquet operators `U = U12(eps) (U1 ⊗ U2)`,
//! evaluates the universal transition parameter `Λ = v²/D²` for them, and
//! measures level-spacing statistics and eigenstate entanglement against the
//! corresponding random-matrix and perturbative predictions.
//!
//! Module map:
//!
//! - [`numerics`]: special functions, adaptive quadrature, seeded random streams
//! - [`linalg`]: dense complex matrices, unitary eigendecomposition, SVD
//! - [`spin`]: angular momentum operators and the single kicked top
//! - [`coupled_tops`]: full Floquet operator and its transition parameter
//! - [`rmt`]: circular ensembles, transition-ensemble couplings, `Λ` formulas
//! - [`spectral_stats`]: spacings, reference laws, perturbative spacing density
//! - [`entanglement`]: Schmidt spectra, entropies and their predictions
//! - [`harness`]: experiment configuration, execution and output

// Links the system OpenBLAS/LAPACK used by `linalg`.
use openblas_src as _;

pub mod coupled_tops;
pub mod entanglement;
mod error;
pub mod harness;
pub mod linalg;
pub mod numerics;
pub mod rmt;
pub mod spectral_stats;
pub mod spin;

pub use coupled_tops::{CoupledTopParams, LambdaMethod, LambdaReport};
pub use entanglement::{EntropyReport, SchmidtSpectrum};
pub use error::{Error, Result};
pub use linalg::{CMatrix, SpectralDecomposition};
pub use numerics::{QuadratureSpec, RngStream};
pub use rmt::{Coupling, EnsembleSpec, MatrixElementLaw, Symmetry};
pub use spectral_stats::{Histogram, SpacingSample};
pub use spin::TopParams;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
