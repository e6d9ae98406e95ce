use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the operation's domain (e.g. a non-subset).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid variable: {0}")]
    Variable(String),

    #[error("invalid distribution: {0}")]
    Distribution(String),

    #[error("invalid measurement scenario: {0}")]
    Scenario(String),

    #[error("invalid process `{process}`: {reason}")]
    Process { process: String, reason: String },

    #[error("composition error: {0}")]
    Composition(String),

    #[error("wiring error on `{variable}`: {reason}")]
    Wiring { variable: String, reason: String },

    /// Open networks or reciprocities where a closed, reciprocity-free
    /// network is required.
    #[error("structure error: {0}")]
    Structure(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal error: {0}")]
    Internal(String),
}
