use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("{what} = {value} exceeds the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("value {value} outside the domain {domain}")]
    Domain { value: String, domain: &'static str },

    #[error("bound vacuous: |λ₁ − λ'₁|/n = {ratio} is below the depolarising weight q = {q}")]
    BoundVacuous { ratio: f64, q: f64 },

    #[error("malformed operator dump at line {line}: {message}")]
    Dump { line: usize, message: String },
}
