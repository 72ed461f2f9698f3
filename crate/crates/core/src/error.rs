use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("taxon count {0} is below the minimum of 3")]
    TooFewTaxa(usize),

    #[error("taxon count {0} exceeds the supported maximum of 64")]
    TooManyTaxa(usize),

    #[error("taxon {taxon} is outside 1..={n}")]
    TaxonOutOfRange { taxon: usize, n: usize },

    #[error("invalid split: {0}")]
    InvalidSplit(String),

    #[error("taxon counts differ: {0} vs {1}")]
    MismatchedTaxa(usize, usize),

    #[error("{what} refuses n = {n}; brute-force bound is {max}")]
    BoundExceeded {
        what: &'static str,
        n: usize,
        max: usize,
    },

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("network is not 1-nested: {0}")]
    NotOneNested(String),

    #[error("invalid PC-tree: {0}")]
    InvalidPcTree(String),

    #[error("split system is not circular")]
    NotCircular,

    #[error("distance vector is not Kalmanson for the order: quadruple ({0}, {1}, {2}, {3}) violates it")]
    NotKalmanson(usize, usize, usize, usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    /// True for errors raised because an input exceeded a brute-force bound.
    pub fn is_bound(&self) -> bool {
        matches!(self, Error::BoundExceeded { .. })
    }
}

pub(crate) fn check_n(n: usize) -> Result<()> {
    if n < 3 {
        Err(Error::TooFewTaxa(n))
    } else if n > 64 {
        Err(Error::TooManyTaxa(n))
    } else {
        Ok(())
    }
}

pub(crate) fn check_bound(what: &'static str, n: usize, max: usize) -> Result<()> {
    if n > max {
        Err(Error::BoundExceeded { what, n, max })
    } else {
        Ok(())
    }
}
