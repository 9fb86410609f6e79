use thiserror::Error;

use crate::exactnum::QPoly;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("polynomial has no real root greater than 1")]
    NoRootAboveOne,
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("(p, q) = ({p}, {q}) is outside the family 1 <= p <= q")]
    InvalidFamily { p: i64, q: i64 },
    #[error("operands live in different number fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not invertible; modulus has the factor {0}")]
    NonInvertible(QPoly),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("orbit of 1 was not resolved within {budget} iterations")]
    IncompleteOrbit { budget: usize },
    #[error("step function has zero integral")]
    ZeroMass,
    #[error("base is an integer")]
    IntegerBase,
    #[error("the two bases are equal")]
    EqualBases,
    #[error("sample count must be positive")]
    EmptySample,
    #[error("invalid configuration: {0}")]
    Config(String),
}
