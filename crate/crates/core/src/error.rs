use thiserror::Error;

/// Errors raised by the arithmetic and verdict layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The input is valid but exceeds a configured enumeration or size cap.
    #[error("range error: {what} = {value} exceeds cap {cap}")]
    Range { what: String, value: u128, cap: u128 },

    /// Ring element with a unital determinant that is not a unit mod n.
    #[error("element is not invertible: unital determinant {delta}, gcd(delta, n) = {gcd}")]
    NotInvertible { delta: u64, gcd: u64 },

    #[error("division by zero")]
    DivisionByZero,

    /// Operands were built over different rings or fields.
    #[error("operands belong to different structures: {0}")]
    Mismatch(String),

    /// The hypothesis of a conditional theorem does not hold (e.g. m does not divide q - 1).
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// Two independent computations disagreed. Always a bug.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn check_cap(what: &str, value: u128, cap: u128) -> Result<()> {
    if value > cap {
        Err(Error::Range { what: what.to_string(), value, cap })
    } else {
        Ok(())
    }
}
