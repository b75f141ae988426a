use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error in {function}: {detail}")]
    Domain { function: &'static str, detail: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not unitary (probe residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("matrix is not Hermitian (max asymmetry {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not diagonal (max off-diagonal modulus {residual:.3e})")]
    NotDiagonal { residual: f64 },

    #[error("{routine} did not converge (info = {info})")]
    NonConvergence { routine: &'static str, info: i32 },

    #[error(
        "quadrature did not converge: estimate {estimate:.6e}, error {error:.3e} after {subdivisions} subdivisions"
    )]
    Quadrature { estimate: f64, error: f64, subdivisions: usize },

    #[error("target {target} out of range (maximum {maximum})")]
    OutOfRange { target: f64, maximum: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("stage `{stage}` failed for {params}: {source}")]
    Stage {
        stage: &'static str,
        params: String,
        #[source]
        source: Box<Error>,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain { function, detail: detail.into() }
    }

    /// Wraps `self` with the pipeline stage and parameters it failed in.
    pub fn in_stage(self, stage: &'static str, params: impl Into<String>) -> Self {
        Error::Stage { stage, params: params.into(), source: Box::new(self) }
    }
}
