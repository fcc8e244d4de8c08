use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("certificate failed: {0}")]
    Certificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}

pub(crate) fn malformed(msg: impl Into<String>) -> Error {
    Error::Malformed(msg.into())
}
