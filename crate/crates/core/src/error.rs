use thiserror::Error;

use crate::model::{AgentId, CostOrderingViolation};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: wrong matrix shapes, empty sides, unknown agents.
    #[error("shape error: {0}")]
    Shape(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("market violates surplus dominance: {0} violation(s), first {1}")]
    InvalidMarket(usize, String),

    #[error("detailed market violates cost ordering at {0}")]
    CostOrdering(CostOrderingViolation),

    #[error("enumeration cap exceeded: {what} needs {needed}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        needed: u64,
        cap: u64,
    },

    #[error("price vector infeasible: {0}")]
    InfeasiblePrice(String),

    #[error("payoff vector is not in the core: {0}")]
    NotInCore(String),

    #[error("({x}, {z}) is not in the two-sided core: {reason}")]
    NotInTwoSidedCore { x: String, z: String, reason: String },

    #[error("not a competitive equilibrium: {0}")]
    NotEquilibrium(String),

    #[error("matching is invalid: {0}")]
    InvalidMatching(String),

    #[error("agent {0} is not part of the market")]
    UnknownAgent(AgentId),

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Structural problems with the input itself, as opposed to well-formed
    /// inputs the solver refuses.
    pub fn is_structural(&self) -> bool {
        matches!(
            self,
            Error::Shape(_) | Error::Parse(_) | Error::UnknownAgent(_) | Error::Io(_)
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
