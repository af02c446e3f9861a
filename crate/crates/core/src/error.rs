use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),

    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("subspace is not contained in the enclosing space")]
    NotContained,

    #[error("inner product is not positive definite (leading minor {0} is not positive)")]
    NotPositiveDefinite(usize),

    #[error("inner product is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),

    #[error("structure constants are not antisymmetric at c[{i}][{j}][{k}]")]
    NotAntisymmetric { i: usize, j: usize, k: usize },

    #[error("Jacobi identity fails for basis triple ({i}, {j}, {k})")]
    JacobiViolation { i: usize, j: usize, k: usize },

    #[error("subspace is not bracket-closed: [b{0}, b{1}] leaves it")]
    NotSubalgebra(usize, usize),

    #[error("basis vectors are linearly dependent ({0})")]
    DependentBasis(&'static str),

    #[error("instance failed validation: {}", .0.join(", "))]
    ValidationFailed(Vec<String>),

    #[error("assembled symplectic form on the tangent model is singular")]
    DegenerateModel,

    #[error("vector is not in N0 (only the m* block may be nonzero)")]
    NotInN0,

    #[error("chain assertion ({index}) failed: {what}")]
    ChainInconsistent { index: usize, what: String },

    #[error("tube point is off the slice chart (group coordinate must be zero)")]
    OffSlice,

    #[error("exponential series remainder {bound:e} exceeds tolerance {tol:e}")]
    SeriesNotConverged { bound: f64, tol: f64 },

    #[error("invalid rational literal {0:?}")]
    BadScalar(String),

    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
}
