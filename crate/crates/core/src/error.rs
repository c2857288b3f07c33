use thiserror::Error;

/// Errors raised by the workbench.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("tape index {index} out of range for arity {arity}")]
    TapeOutOfRange { index: usize, arity: usize },
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
    #[error("word is not in the domain: {0}")]
    NotInDomain(String),
    #[error("element not representable: {0}")]
    NotRepresentable(String),
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("relation `{name}` expects {expected} arguments, got {got}")]
    ArityMismatch { name: String, expected: usize, got: usize },
    #[error("formula has free variables: {0:?}")]
    FreeVariables(Vec<String>),
    #[error("wrong norm variant: {0}")]
    WrongVariant(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("search cap exceeded: {0}")]
    CapExceeded(String),
    #[error("cannot determine: {0}")]
    Undetermined(String),
}

pub type Result<T> = std::result::Result<T, Error>;
