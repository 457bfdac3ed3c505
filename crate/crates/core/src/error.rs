use thiserror::Error;

use crate::graph::{Amount, NodeId, Oid};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("delta must be non-negative, got {0}")]
    NegativeDelta(Amount),

    #[error("node id {0:?} is reserved for the augmented network")]
    ReservedNode(NodeId),

    #[error("record {0} is not mapped to any netting set")]
    UnmappedRecord(Oid),

    #[error("record {0} not found in graph")]
    UnknownRecord(Oid),

    #[error("the claim being discharged must be enforceable: {0} is an acceptance")]
    NotAnObligation(Oid),

    #[error("invalid settlement cycle: {0}")]
    InvalidCycle(String),

    #[error("cycle amount {amount} exceeds remaining {remaining} on {oid}")]
    CapacityViolation {
        oid: Oid,
        amount: Amount,
        remaining: Amount,
    },

    #[error("instance exceeds enumeration bound: {0}")]
    OracleBound(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{path}: {}", summarize(.diagnostics))]
    Ledger {
        path: String,
        diagnostics: Vec<RowDiagnostic>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// One malformed ledger row. `row` is the 1-based line number, header included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowDiagnostic {
    pub row: usize,
    pub message: String,
}

impl std::fmt::Display for RowDiagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "row {}: {}", self.row, self.message)
    }
}

fn summarize(diagnostics: &[RowDiagnostic]) -> String {
    diagnostics
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
