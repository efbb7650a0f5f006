use crate::path::Path;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("type mismatch at {path}: {msg}")]
    TypeMismatch { path: Path, msg: String },
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("invalid path {path}: no such subterm")]
    InvalidPath { path: Path },
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("manifest error in rule `{rule}`: {msg}")]
    Manifest { rule: String, msg: String },
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("rule `{0}` is an inequality; backward use is illegal")]
    IllegalDirection(String),
    #[error("redex mismatch at {path}: expected {expected}, found {found}")]
    RedexMismatch {
        path: Path,
        expected: String,
        found: String,
    },
    #[error("unbound metavariable `{0}` in step substitution")]
    UnboundMeta(String),
    #[error("conflicting assignment for `{var}`: {a} vs {b}")]
    MetaConflict { var: String, a: String, b: String },
    #[error("step {index}: {source}")]
    Step {
        index: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("endpoint mismatch: proof ends at `{found}`, claim is `{claimed}`")]
    EndpointMismatch { found: String, claimed: String },
    #[error("derived rule `{rule}` rejected: {msg}")]
    JustificationFailed { rule: String, msg: String },
    #[error("not a closed formula: expected type 0 -> 0, found {0}")]
    NotClosedFormula(String),
    #[error("scope error: {0}")]
    Scope(String),
    #[error("symbol `{0}` is not interpreted as a total function")]
    NonFunctionalSymbol(String),
    #[error("predicate is not typable: {0}")]
    Untypable(String),
    #[error("truncation width {n} too small; need at least {need}")]
    TruncationTooSmall { n: usize, need: usize },
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
