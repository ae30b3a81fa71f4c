use thiserror::Error;

use crate::algebra::Poly;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p must be an odd prime (got {0})")]
    NotOddPrime(u64),

    #[error("modulus {0} does not fit in 32 bits")]
    ModulusTooLarge(u64),

    #[error("mixed moduli: {0} and {1}")]
    FieldMismatch(u64, u64),

    #[error("division by zero")]
    DivisionByZero,

    #[error("series division by a series that is zero to its valid order")]
    SeriesDivisionByZero,

    #[error("quotient of two exact series needs an explicit target order")]
    UnboundedPrecision,

    #[error("u{index} must be nonzero")]
    ZeroTripleEntry { index: usize },

    #[error("u1 must be different from 0 and -1/2 (got {u1})")]
    InvalidU1 { u1: u64 },

    #[error("equation (4) requires p >= 5 (got {0})")]
    MillsRobbinsPrimeTooSmall(u64),

    #[error("partial quotient a{index} = {quotient} has degree < 1")]
    ConstantPartialQuotient { index: usize, quotient: Poly },

    #[error("empty list of partial quotients")]
    EmptyPartialQuotients,

    #[error("{available} partial quotients only reach order {reachable}, requested {requested}")]
    InsufficientQuotients { available: usize, reachable: i64, requested: i64 },

    #[error("no admissible partial quotient after {emitted} quotients (bar = {bar})")]
    NoAdmissibleQuotient { emitted: usize, bar: Poly },

    #[error("equation must have degree >= 1 in x")]
    DegenerateEquation,

    #[error("coefficient degree {observed} exceeds a-priori bound {bound} after {steps} steps")]
    DegreeBoundExceeded { observed: usize, bound: usize, steps: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
