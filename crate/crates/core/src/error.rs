use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("class violation ({class}): {message}")]
    ClassViolation { class: String, message: String },

    #[error("invalid machine: {0}")]
    InvalidMachine(String),

    #[error("operation requires a checking stack automaton, got {0}")]
    NotCsa(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("critical-language case list is empty")]
    EmptyCases,

    #[error("enumeration budget exceeded: {words} words of length {n} > budget {budget}; supply a word list")]
    BudgetExceeded { n: usize, words: u128, budget: u128 },

    #[error("too few finite rows for a fit: {got} < {needed}")]
    TooFewRows { got: usize, needed: usize },

    #[error("corpus: {0}")]
    Corpus(String),
}
