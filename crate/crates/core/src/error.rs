use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The word is not a rearrangement of `1..=n`.
    #[error("{word:?} is not a rearrangement of 1..={n}", n = word.len())]
    NotBijection { word: Vec<u8> },

    #[error("word length {0} outside supported range 1..={max}", max = crate::MAX_N)]
    Length(usize),

    #[error("permutation {0:?} is not a single n-cycle")]
    NotAnNCycle(Vec<u8>),

    #[error("word {0} has repeated letters")]
    Duplicates(String),

    #[error("invalid class query: {0}")]
    Query(String),

    #[error("cycle word {word:?} does not have the required shape: {reason}")]
    Shape { word: Vec<u8>, reason: String },

    #[error("word of length {0} is too small (need at least 3)")]
    TooSmall(usize),

    #[error("argument out of range: {0}")]
    Range(String),

    #[error("count overflowed 64 bits")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;
