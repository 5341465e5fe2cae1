use std::path::PathBuf;

use thiserror::Error;

use crate::NodeId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("node {0} is not in communication history")]
    UnknownPeer(NodeId),

    #[error("forwarded exceeds generated (F={forwarded}, T={generated})")]
    ForwardedExceedsGenerated { forwarded: u64, generated: u64 },

    #[error("crisp value out of range: {kind} = {value}")]
    CrispOutOfRange { kind: &'static str, value: f64 },

    #[error("inconsistent HELLO counts (x''={in_range}, x'={collected}, y={expected})")]
    InconsistentHelloCounts {
        in_range: u64,
        collected: u64,
        expected: u64,
    },

    #[error("degenerate delay denominator (m_j={queue_size}, tau'={tau_prime})")]
    DegenerateDelay { queue_size: u32, tau_prime: f64 },

    #[error("invalid path position q={q} for path of {p} nodes")]
    InvalidPathPosition { q: usize, p: usize },

    #[error("proposition precondition violated: {0}")]
    PropositionPrecondition(String),

    #[error("attribute field {field} out of range: {value}")]
    AttributeOutOfRange { field: &'static str, value: f64 },

    #[error("invalid config field `{field}`: {reason}")]
    InvalidConfig { field: String, reason: String },

    #[error("config line {line}: {reason}")]
    ConfigSyntax { line: usize, reason: String },

    #[error("cannot write {path}: {reason}")]
    Output { path: PathBuf, reason: String },
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
