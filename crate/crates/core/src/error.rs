use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {0}x{1}")]
    NonSquare(usize, usize),

    #[error("matrix is not Hermitian (‖M − M†‖_F = {0:e})")]
    NotHermitian(f64),

    #[error("{operation} did not converge within {sweeps} sweeps")]
    NoConvergence {
        operation: &'static str,
        sweeps: usize,
    },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix contains NaN or infinite entries")]
    NonFinite,

    #[error("tolerance `{0}` must be finite and non-negative")]
    InvalidTolerance(&'static str),

    #[error("invalid Hilbert space: {0}")]
    InvalidSpace(String),

    #[error("state is zero (norm {0:e})")]
    ZeroState(f64),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("observable is not in the commutant of L†L (commutator norm {0:e})")]
    NotInAlgebra(f64),

    #[error("weights do not normalize the state: Σ λ_j d_j = {0}")]
    WeightMismatch(f64),

    #[error("blocks are not orthonormal (Gram residual {0:e})")]
    BlocksNotOrthogonal(f64),

    #[error("map is not an isometry (‖W†W − I‖_F = {0:e})")]
    NotIsometry(f64),

    #[error("state is not maximally entangled: {0}")]
    NotMaximalEpr(String),

    #[error("graph function is undefined at a = {0}")]
    GraphUndefined(f64),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("eigenvalue assignment contains duplicate values")]
    DuplicateValues,

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("invalid group specification: {0}")]
    InvalidGroup(String),

    #[error("grid size must be a positive odd integer, got {0}")]
    InvalidGridSize(usize),

    #[error("cell index {r} outside |r| <= {max}")]
    CellOutOfRange { r: i64, max: i64 },

    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
}

impl Error {
    /// Numerical failures, as opposed to invalid inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. } | Error::QuadratureFailure(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
