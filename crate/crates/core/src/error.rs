use thiserror::Error;

/// Errors raised by cone and algebra operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("elements belong to different algebras: {left} vs {right}")]
    AlgebraMismatch { left: String, right: String },

    #[error("invalid algebra descriptor: {0}")]
    InvalidAlgebra(String),

    #[error("coordinate vector has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point is not in the cone interior (smallest eigenvalue {min_eigenvalue:e})")]
    NotInterior { min_eigenvalue: f64 },

    #[error("element is not an idempotent (residual {residual:e})")]
    NotIdempotent { residual: f64 },

    #[error("multiplication operator has eigenvalue {0} away from 0, 1/2, 1")]
    PeirceSpectrum(f64),

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("power {exponent} undefined for eigenvalue {eigenvalue}")]
    PowerDomain { exponent: f64, eigenvalue: f64 },

    #[error("gauge ratio {0} <= 1: the half-line stays inside the cone")]
    NoBoundaryCrossing(f64),

    #[error("points are proportional; no two-dimensional chart exists")]
    Proportional,

    #[error("pair has zero Thompson distance; midpoint set is a single point")]
    CoincidentPair,

    #[error("negative coordinate {value} at index {index}")]
    NegativeCoordinate { index: usize, value: f64 },

    #[error("perturbation size fell below {floor:e} without staying interior")]
    EpsilonFloor { floor: f64 },

    #[error("limit exceeded: {0}")]
    Limit(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
