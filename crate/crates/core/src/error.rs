use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or inconsistent input (unknown element, bad structure, ...).
    #[error("invalid input: {0}")]
    Input(String),

    /// An exhaustive routine was asked to work above its configured bound.
    #[error("instance too large: {what} is {size}, limit is {limit}")]
    Scale {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    /// No pairing satisfies the requested conditions, so the vote is undefined.
    #[error("no feasible pairing exists")]
    NoFeasiblePairing,

    /// A proven property failed to hold; points at a bug in an oracle or solver.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
