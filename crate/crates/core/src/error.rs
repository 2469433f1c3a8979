use thiserror::Error;

use crate::inverse::EtaViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("site {site} out of range for a chain of {len} sites")]
    SiteOutOfRange { site: usize, len: usize },

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("eigensolver did not converge for eigenvalue {index} (residual {residual:e})")]
    NoConvergence { index: usize, residual: f64 },

    #[error("target amplitude on the start site is 1; the target is already a basis state")]
    BasisTarget,

    #[error("infeasible reflection vector: {}", format_violations(.0))]
    InfeasibleEta(Vec<EtaViolation>),

    #[error("epsilon {epsilon} is too large: it must be below half the smallest gap ({half_gap})")]
    EpsilonTooLarge { epsilon: f64, half_gap: f64 },

    #[error("spectrum must contain exactly one zero eigenvalue (found {found})")]
    ZeroEigenvalue { found: usize },

    #[error("degenerate values: entries {first} and {second} coincide")]
    Degenerate { first: usize, second: usize },

    #[error("Lanczos recurrence broke down at step {step}")]
    LanczosBreakdown { step: usize },

    #[error("Lanczos basis lost orthogonality (deviation {deviation:e})")]
    LossOfOrthogonality { deviation: f64 },

    #[error("negative value {value:e} under square root for coupling {index}")]
    NegativeRadicand { index: usize, value: f64 },

    #[error("Hahn chain recurrence residual {residual:e} exceeds tolerance")]
    HahnResidual { residual: f64 },

    #[error("reflection vector has a zero entry at site {site}")]
    ZeroEtaEntry { site: usize },

    #[error("linear system has no solution (residual {residual:e})")]
    NoSolution { residual: f64 },

    #[error("refinement diverged: {0}")]
    Diverged(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

fn format_violations(v: &[EtaViolation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}
