use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed literal; `offset` is the byte position of the first bad character.
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    /// Input outside the domain of the operation (empty set, negative b-exponent, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Enumeration window or bit-window too large for the requested kernel.
    #[error("capacity error: {0}")]
    Capacity(String),

    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),

    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: message.into(),
        }
    }

    pub(crate) fn domain(message: impl Into<String>) -> Self {
        Error::Domain(message.into())
    }

    /// Message without the kind prefix.
    pub fn detail(&self) -> String {
        match self {
            Error::Parse { offset, message } => format!("byte {offset}: {message}"),
            Error::Domain(m) | Error::Capacity(m) | Error::Config(m) => m.clone(),
            Error::UnknownTheorem(id) => format!("`{id}`"),
        }
    }

    /// Short machine-readable tag, stable across releases.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::Domain(_) => "domain",
            Error::Capacity(_) => "capacity",
            Error::UnknownTheorem(_) => "unknown-theorem",
            Error::Config(_) => "config",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
