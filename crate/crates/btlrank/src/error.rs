use thiserror::Error;

/// Errors produced by graph construction, fitting, and bound evaluation.
#[derive(Debug, Error)]
pub enum BtlError {
    /// A constructor or operation was called with out-of-range parameters.
    #[error("invalid parameter: {0}")]
    Validation(String),

    /// The vanilla MLE does not exist because the win digraph is not
    /// strongly connected (some item never wins or never loses against
    /// the rest of the graph).
    #[error("vanilla MLE does not exist: win digraph is not strongly connected")]
    MleNonexistent,

    /// An operation that presumes a connected comparison graph was given a
    /// disconnected one.
    #[error("comparison graph is disconnected")]
    Disconnected,

    /// A tree-only operation was given a non-tree graph.
    #[error("graph is not a tree: {0}")]
    NotATree(String),

    /// The objective or an iterate became non-finite.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed file: {0}")]
    Format(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, BtlError>;
