use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix is not Hermitian (asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("not a density matrix: {0}")]
    NotDensity(String),

    #[error("function undefined at eigenvalue {0:e}")]
    Domain(f64),

    #[error("support mismatch: {0}")]
    SupportMismatch(String),

    #[error("rank-deficient state (smallest eigenvalue {0:.3e})")]
    RankDeficient(f64),

    #[error("not an orthogonal projection (residual {0:.3e})")]
    NotProjection(f64),

    #[error("no EITFF(2r, r, {n}) with r = 2^{a}: requires n <= {max}")]
    Existence { n: usize, a: u32, max: usize },

    #[error("privacy violation: {0}")]
    PrivacyViolation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True for failures of the numerics themselves rather than of the input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::NoConvergence(_) | Error::Numerical(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
