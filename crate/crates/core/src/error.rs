use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid document: {0}")]
    Document(String),

    #[error("indeterminate count mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("exponent overflow while multiplying polynomials")]
    DegreeOverflow,

    #[error("polynomial degree {degree} exceeds the configured cap {cap}")]
    DegreeCap { degree: u64, cap: u32 },

    #[error("element {element} does not belong to semiring {semiring}")]
    ForeignElement { element: String, semiring: String },

    #[error("semiring mismatch: {0} vs {1}")]
    SemiringMismatch(String, String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("unknown letter {0:?}")]
    UnknownLetter(char),

    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),

    #[error("unknown state {0:?}")]
    UnknownState(String),

    #[error("invalid position {0:?}")]
    InvalidPosition(String),

    #[error("rank mismatch for {symbol}: expected {expected}, found {found}")]
    RankMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("invalid homomorphism: {0}")]
    InvalidHomomorphism(String),

    #[error("homomorphism is deleting; images of deleting homomorphisms are not supported")]
    DeletingHomomorphism,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("automaton is not deterministic and complete: {0}")]
    NotDeterministic(String),

    #[error("semiring {0} is not a computable field")]
    NotAField(String),

    #[error("resource budget exhausted: {0}")]
    ResourceExhausted(String),
}
