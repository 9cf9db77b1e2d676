use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("enumeration guard: n = {n} exceeds the limit {limit}")]
    Guard { n: usize, limit: usize },

    #[error("degenerate state: {0}")]
    Degenerate(String),

    #[error("numerical precision: {0}")]
    Precision(String),

    #[error("sampler error: {0}")]
    Sampler(String),

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
