use thiserror::Error;

/// Errors raised by structure construction and the bounded search routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input: unknown vertex ids, bad parameters, invalid files.
    #[error("input error: {0}")]
    Input(String),
    /// An exhaustive search would exceed its configured cap.
    #[error("capacity error: {what} needs {needed}, cap is {cap}")]
    Capacity {
        what: &'static str,
        needed: usize,
        cap: usize,
    },
    /// A caller-side precondition of an operation does not hold.
    #[error("contract error: {0}")]
    Contract(String),
    /// An amalgamation step produced a structure outside its class.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn check_cap(what: &'static str, needed: usize, cap: usize) -> Result<()> {
    if needed > cap {
        Err(Error::Capacity { what, needed, cap })
    } else {
        Ok(())
    }
}
