use thiserror::Error;

use crate::seq::IntSeq;

/// Errors raised by the library.
///
/// Precondition violations and resource guards are kept apart so that callers
/// (the CLI in particular) can map them to distinct exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operation is undefined on the empty sequence")]
    EmptySequence,

    #[error("pattern must be nonempty")]
    EmptyPattern,

    #[error("{0} is not a Cayley permutation")]
    NotCayleyPermutation(IntSeq),

    #[error("{0} is not an inversion sequence")]
    NotInversionSequence(IntSeq),

    #[error("{host} does not contain the pattern {pattern}")]
    PatternNotContained { host: IntSeq, pattern: IntSeq },

    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("{what} = {value} exceeds the configured limit {limit}")]
    GuardExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("series domain error: {0}")]
    SeriesDomain(String),

    #[error("coefficient at ({i}, {j}) does not unscale to an integer count")]
    NonIntegerCount { i: usize, j: usize },

    #[error("malformed tree: {0}")]
    MalformedTree(String),
}

impl Error {
    /// Short machine-readable tag for the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptySequence => "empty-sequence",
            Error::EmptyPattern => "empty-pattern",
            Error::NotCayleyPermutation(_) => "not-cayley-permutation",
            Error::NotInversionSequence(_) => "not-inversion-sequence",
            Error::PatternNotContained { .. } => "pattern-not-contained",
            Error::Parse { .. } => "parse",
            Error::GuardExceeded { .. } => "guard-exceeded",
            Error::Precondition(_) => "precondition",
            Error::SeriesDomain(_) => "series-domain",
            Error::NonIntegerCount { .. } => "non-integer-count",
            Error::MalformedTree(_) => "malformed-tree",
        }
    }

    pub fn is_guard(&self) -> bool {
        matches!(self, Error::GuardExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn guard(what: &'static str, value: usize, limit: usize) -> Result<()> {
    if value > limit {
        Err(Error::GuardExceeded { what, value, limit })
    } else {
        Ok(())
    }
}
