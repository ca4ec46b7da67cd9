use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The call itself is malformed (mismatched shapes, bad indices, bad input).
    #[error("usage error: {0}")]
    Usage(String),
    /// A quotient in a criterion has a vanishing denominator at a sample.
    #[error("degenerate sample at z = {re} {im:+}i: {what}")]
    DegenerateSample { re: f64, im: f64, what: String },
    /// Slicing along a direction where the linear functional vanishes.
    #[error("kernel direction: |A(a)| = {0:e} is below the slicing threshold")]
    KernelDirection(f64),
    #[error("series did not converge: {0}")]
    Convergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}
