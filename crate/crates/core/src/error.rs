use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NonHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("index {0} out of range")]
    IndexOutOfRange(usize),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("not a valid density matrix: {0}")]
    InvalidState(String),

    #[error("correlation triple is unphysical (min eigenvalue {min_eigenvalue:e})")]
    Unphysical { min_eigenvalue: f64 },

    #[error("quadrature did not reach tolerance within {evaluations} evaluations")]
    QuadratureFailure { evaluations: usize },

    #[error("history step {step:e} exceeds the stability bound {bound:e}")]
    StepTooLarge { step: f64, bound: f64 },

    #[error("Kraus weight {weight:e} is negative; map is not completely positive")]
    NotCompletelyPositive { weight: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
