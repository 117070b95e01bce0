use thiserror::Error;

/// Errors raised by the library.
///
/// Every operation either rejects its input as out of domain or refuses to
/// run because a configured size cap would be exceeded. The two are kept
/// apart so that callers (the CLI in particular) can map them to different
/// exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("capacity exceeded: {what} requires {required}, cap is {cap}")]
    Capacity {
        what: &'static str,
        required: u128,
        cap: u128,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn capacity(what: &'static str, required: u128, cap: u128) -> Self {
        Error::Capacity {
            what,
            required,
            cap,
        }
    }

    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
