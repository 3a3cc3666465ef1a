use thiserror::Error;

/// Errors raised by the algebraic and numerical operations of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("region mismatch: {0}")]
    RegionMismatch(String),

    #[error("not a refinement: {0}")]
    NotRefinement(String),

    #[error("regions overlap: {0}")]
    Overlap(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("unsupported state: {0}")]
    UnsupportedState(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors caused by malformed input rather than by a
    /// mathematically invalid request.
    pub fn is_malformed_input(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_degree(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DegreeMismatch { left, right })
    }
}
