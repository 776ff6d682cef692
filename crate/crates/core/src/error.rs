use thiserror::Error;

use crate::encoding::Violation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("invalid symbol `{0}`")]
    BadSymbol(String),
    #[error("tuple symbol `{symbol}` has {found} components, expected {expected}")]
    ArityMismatch { expected: usize, found: usize, symbol: String },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("transition table is partial: no entry for {0} (use --complete-with-sink to add a sink state)")]
    Partial(String),
    #[error("conflicting entries for {0}")]
    Conflict(String),
    #[error("s-expression: {0}")]
    Sexp(String),
}

impl ParseError {
    pub(crate) fn syntax(line: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax { line, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("position `{0}` is not in the tree domain")]
    PositionNotInDomain(String),
    #[error("symbol `{0}` is not in the automaton alphabet")]
    UnknownSymbol(String),
    #[error("automaton is not reduced")]
    NotReduced,
    #[error("state {0} is not produced by any tree")]
    StateNotProducible(usize),
    #[error("state {0} is the run of only finitely many trees")]
    StateNotInfinite(usize),
    #[error("tree language is slim; no thick witness exists")]
    NotFat,
    #[error("level exploration exceeded cap {cap} below the decisive bound {bound}; result inconclusive")]
    CapExceededInconclusive { cap: usize, bound: usize },
    #[error("tree thickness {thickness} exceeds block width {k}")]
    ThicknessExceedsK { thickness: usize, k: usize },
    #[error("invalid code word: {0}")]
    InvalidShape(Violation),
    #[error("domain language has trees thicker than block width {0}")]
    FatDomain(usize),
    #[error("block width must be at least 1")]
    InvalidK,
    #[error("relation `{name}` declared with arity {declared} but its automaton has arity {actual}")]
    ArityMismatch { name: String, declared: usize, actual: usize },
    #[error("compiled automaton exceeded the state budget of {0}")]
    BudgetExceeded(usize),
    #[error("complement requires a deterministic, complete automaton")]
    ComplementOfNondeterministic,
    #[error("presentation has no binary relation named `{0}`")]
    MissingRelation(String),
    #[error("domain language is not slim")]
    DomainNotSlim,
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("{path}: {source}")]
    File { path: String, source: ParseError },
    #[error("{0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
