use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is not unimodular (determinant {det})")]
    NotUnimodular { det: String },

    #[error("matrix is singular")]
    Singular,

    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid weighted function: {0}")]
    InvalidWeights(String),

    #[error("integer overflow while {0}")]
    Overflow(&'static str),

    #[error("root finder did not converge after {iterations} iterations (max residual {residual:e})")]
    RootsNotConverged { iterations: usize, residual: f64 },

    #[error("set size budget of {cap} exceeded (at least {lower_bound} elements)")]
    CapExceeded { cap: usize, lower_bound: usize },

    #[error(
        "no support of size <= {max_support} within radius {radius} achieves defect < {delta}; try a larger radius"
    )]
    RankSearchExhausted {
        radius: i64,
        max_support: usize,
        delta: f64,
    },

    #[error("linear program is {0}")]
    Lp(&'static str),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
