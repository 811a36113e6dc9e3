//! Error type shared by all modules.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An enumeration guard would be exceeded; carries a human-readable account.
    GuardExceeded(String),
    /// A member / vertex / ground-element index is out of range.
    IndexOutOfRange { index: usize, bound: usize },
    /// The outcome has probability zero, so conditional quantities are undefined.
    NotPossible,
    /// The hypergraph is not of the form `H_r(G)` for any graph `G`.
    NotRealizable,
    /// `r` does not divide `n` where a perfect matching / factor is requested.
    NotDivisible { n: usize, r: usize },
    /// A parameter fails its precondition.
    InvalidParameter(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::GuardExceeded(what) => write!(f, "enumeration guard exceeded: {what}"),
            Error::IndexOutOfRange { index, bound } => {
                write!(f, "index {index} out of range (bound {bound})")
            }
            Error::NotPossible => write!(f, "outcome has probability zero"),
            Error::NotRealizable => write!(f, "hypergraph is not the clique hypergraph of any graph"),
            Error::NotDivisible { n, r } => write!(f, "r = {r} does not divide n = {n}"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
