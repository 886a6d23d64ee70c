use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QError {
    #[error("deformation parameter q = {0} is outside (0, 1)")]
    InvalidQ(f64),
    #[error("insufficient working precision: {0} decimal digits needed")]
    InsufficientPrecision(u32),
    #[error("lower parameter hits a pole at term {0}")]
    PoleInLowerParameter(usize),
    #[error("series did not converge within {0} terms")]
    NonConvergent(usize),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("truncated norm {0} is below 1 - 1e-8; enlarge the Fock space")]
    InsufficientTruncation(f64),
    #[error("negative degree {0}")]
    DegreeNegative(i64),
    #[error("interior support touches the window edge")]
    InsufficientWindow,
    #[error("invalid plan: {0}")]
    PlanInvalid(String),
}

pub type Result<T> = std::result::Result<T, QError>;
