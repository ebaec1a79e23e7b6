use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument left the mathematical domain of an operation.
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    /// A profile failed construction-time validation.
    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    /// A star-shaped domain failed construction-time validation.
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    /// A stated precondition of an operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Malformed scalar input (step counts, grid sizes, ranges).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A numerical solve broke down.
    #[error("solver failure: {0}")]
    Solver(String),

    /// A matrix expected to be symmetric positive definite is not.
    #[error("matrix not SPD: {0}")]
    NotSpd(String),

    /// Galerkin assembly produced an inconsistent pencil.
    #[error("assembly error: {0}")]
    Assembly(String),

    /// Harness configuration problem.
    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
