use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty sequence")]
    EmptySequence,

    #[error("illegal character {found:?} at index {index}")]
    Parse { index: usize, found: char },

    #[error("entry {index} is not in the declared alphabet: {reason}")]
    Alphabet { index: usize, reason: String },

    #[error("{op} requires a binary (+1/-1) sequence")]
    UnsupportedAlphabet { op: &'static str },

    #[error("max sidelobe is undefined for sequences of length 1")]
    UndefinedSidelobe,

    #[error("domain error: {0}")]
    Domain(String),

    /// Two computation routes disagreed; always an implementation bug.
    #[error("internal consistency failure in {what}: {left} vs {right}")]
    Inconsistent {
        what: &'static str,
        left: f64,
        right: f64,
    },

    #[error("quadrature route failed: {0}")]
    RouteFailure(String),

    #[error(
        "no Barker sequence of length {0} is known; the known lengths are 2, 3, 4, 5, 7, 11 and 13"
    )]
    NoKnownBarker(usize),

    #[error("not a difference set mod {v}: residue {first} occurs {first_count} times but residue {second} occurs {second_count} times")]
    NotDifferenceSet {
        v: usize,
        first: usize,
        first_count: usize,
        second: usize,
        second_count: usize,
    },

    #[error("periodic autocorrelation is not two-level: theta({lag_a}) = {value_a} but theta({lag_b}) = {value_b}")]
    NotTwoLevel {
        lag_a: usize,
        value_a: i64,
        lag_b: usize,
        value_b: i64,
    },

    #[error("length {n} exceeds the search guard of {limit}; set the override (SEQMERIT_MAX_N) to proceed")]
    GuardExceeded { n: usize, limit: usize },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
