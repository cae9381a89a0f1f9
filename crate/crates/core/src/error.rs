use thiserror::Error;

/// Errors raised by the numerical kernels, the staircase model and the
/// transforms. Verification failures are never errors; they are reported as
/// data inside the report types.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid profile at index {index}: {message}")]
    Profile { index: usize, message: String },

    #[error("{what} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        what: &'static str,
        value: i64,
        min: i64,
        max: i64,
    },

    #[error("matrix has no real eigenvalue")]
    NoRealEigenvalue,

    #[error("{lemma}: precondition failed: {failed}")]
    Precondition { lemma: &'static str, failed: String },

    #[error("{lemma}: iteration stalled: {detail}")]
    Stalled { lemma: &'static str, detail: String },

    #[error("parse error at byte {offset} (token {token:?}): {message}")]
    Parse {
        token: String,
        offset: usize,
        message: String,
    },

    #[error("writing output failed: {0}")]
    Output(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}

pub(crate) fn check_range(what: &'static str, value: usize, min: usize, max: usize) -> Result<()> {
    if value < min || value > max {
        return Err(Error::OutOfRange {
            what,
            value: value as i64,
            min: min as i64,
            max: max as i64,
        });
    }
    Ok(())
}
