use thiserror::Error;

use crate::state::{DofKind, Photon};

/// Errors raised by state construction, optical elements and the protocol layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown path `{0}`")]
    UnknownPath(String),
    #[error("path registry: {0}")]
    InvalidRegistry(String),
    #[error("basis label does not fit the register schema: {0}")]
    InvalidLabel(String),
    #[error("register schemas differ: {0}")]
    SchemaMismatch(String),
    #[error("photon {photon} has no {kind} register")]
    MissingRegister { photon: Photon, kind: DofKind },
    #[error("photon {photon} already has a {kind} register")]
    RegisterPresent { photon: Photon, kind: DofKind },
    #[error("{kind} register of photon {photon} is not uniform")]
    NotUniform { photon: Photon, kind: DofKind },
    #[error("routing table: {0}")]
    InvalidRouting(String),
    #[error("frequency is not correlated with path: {0}")]
    CorrelationViolated(String),
    #[error("norm not conserved by {element}: {before} -> {after}")]
    NormViolation {
        element: String,
        before: f64,
        after: f64,
    },
    #[error("invalid target parameters: {0}")]
    InvalidParams(String),
    #[error("outcome ({0}) is not a registered detector")]
    UnknownDetector(String),
    #[error("outcome code {code} out of range for a registry of {size}")]
    OutcomeCodeOutOfRange { code: u8, size: usize },
    #[error("malformed channel frame: {0}")]
    InvalidFrame(String),
    #[error("no Pauli correction maps the collapsed state onto the target")]
    NoCorrection,
    #[error("efficiency denominator q_u + b_t is zero")]
    ZeroDenominator,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
