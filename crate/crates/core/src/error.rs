use thiserror::Error;

/// Errors raised by graph construction, simulation and counting.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("driver {driver} prefers node {value}, outside 1..={n}")]
    PreferenceOutOfRange { driver: usize, value: usize, n: usize },

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid mapping: {0}")]
    InvalidMapping(String),

    #[error("not a permutation of 1..={n}")]
    NotAPermutation { n: usize },

    #[error("{what}: size {value} exceeds the limit {limit}")]
    SizeLimit { what: &'static str, value: usize, limit: usize },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("structural precondition violated: {0}")]
    Structural(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_limit(what: &'static str, value: usize, limit: usize) -> Result<()> {
    if value > limit {
        Err(Error::SizeLimit { what, value, limit })
    } else {
        Ok(())
    }
}
