use thiserror::Error;

/// Errors raised by state construction, measurement assembly, and the
/// separability solver.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("Bloch vector norm {norm} exceeds the unit ball (tolerance {tolerance})")]
    BlochNormTooLarge { norm: f64, tolerance: f64 },

    #[error("matrix is not Hermitian: max |m - m†| entry is {0}")]
    NotHermitian(f64),

    #[error("matrix trace must be 1, got {0}")]
    NonUnitTrace(f64),

    #[error("matrix has negative eigenvalue {0}")]
    NegativeEigenvalue(f64),

    #[error("state vector must have dimension >= 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("state vector is not normalized: norm is {0}")]
    NotNormalized(f64),

    #[error("vectors are not orthogonal: |<a|b>| = {0}")]
    NotOrthogonal(f64),

    #[error("state has no support on the requested subspace (weight {0})")]
    ZeroSubspaceWeight(f64),

    #[error("measurement strength must lie in (0, 1], got {0}")]
    InvalidStrength(f64),

    #[error("inversion strength must be positive, got {0}")]
    NonPositiveStrength(f64),

    #[error("outcome vector |{label}| = {norm} exceeds 1")]
    EtaVectorTooLong { label: String, norm: f64 },

    #[error("outcome vectors must sum to zero, got residual {0}")]
    EtaVectorsUnbalanced(f64),

    #[error("probability entry {0} is negative beyond tolerance")]
    NegativeProbability(f64),

    #[error("distribution must sum to 1, got {0}")]
    NotNormalizedDistribution(f64),

    #[error("hidden-variable weight {0} is negative")]
    NegativeWeight(f64),

    #[error("hidden-variable vector norm {0} exceeds the unit ball")]
    LambdaOutsideBall(f64),

    #[error("hidden-variable model must contain at least one point")]
    EmptyModel,

    #[error("grid must contain at least one point")]
    EmptyGrid,

    #[error("grid point ({x}, {y}) lies outside the unit disk")]
    GridPointOutsideDisk { x: f64, y: f64 },

    #[error("shot count must be at least 1")]
    ZeroShots,

    #[error("LP solver failed: {0}")]
    SolverFailure(String),

    #[error("invalid run configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
