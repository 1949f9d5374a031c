use thiserror::Error;

/// Errors raised across the decomposition and certificate machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("iteration did not converge after {0} sweeps")]
    ConvergenceFailure(usize),
    #[error("plane ({i}, {j}) is not a valid coordinate plane in dimension {n}")]
    IndexOutOfRange { n: usize, i: usize, j: usize },
    #[error("matrix is not unitary (defect {0:.3e})")]
    NotUnitary(f64),
    #[error("matrix is not skew-Hermitian (defect {0:.3e})")]
    NotSkewHermitian(f64),
    #[error("exact characteristic polynomial requested on a floating-point matrix")]
    ExactModeOnInexactInput,
    #[error("partition does not match matrix size: {0}")]
    PartitionMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid triple: {0}")]
    InvalidSpec(String),
    #[error("operation not applicable: {0}")]
    NotApplicable(String),
    #[error("triple is not surjective; no decomposition L·B·H exists")]
    NotSurjectiveSpec,
    #[error("invalid loop word: {0}")]
    InvalidLoop(String),
    #[error("tilde block is undefined on the diagonal (block {0})")]
    DiagonalBlockRequested(usize),
    #[error("triple admits a decomposition; no certificate exists")]
    SpecActuallySurjective,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("epsilon search exhausted without a coefficient above {0:e}")]
    SearchExhausted(f64),
    #[error("no certificate construction covers {0}")]
    DispatchGap(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
