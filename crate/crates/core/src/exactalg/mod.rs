//! Exact arithmetic: big integers, rationals, integer polynomials in `q`,
//! cyclotomic integers and the elementary number theory used everywhere else.

mod cyclotomic;
pub mod numtheory;
mod poly;

pub use cyclotomic::{CycOp, CycValue, CyclotomicInteger};
pub use numtheory::{divisors, gcd, lcm, mobius, p_valuation};
pub use poly::IntPolynomial;

/// Reduced fraction of arbitrary-precision integers with positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("polynomial division left a nonzero remainder")]
    NonzeroRemainder,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("argument must be positive")]
    ZeroArgument,
    #[error("cyclotomic orders differ: {0} vs {1}")]
    OrderMismatch(u32, u32),
}

/// Polynomial division that must be exact.
pub fn exact_divide(num: &IntPolynomial, den: &IntPolynomial) -> Result<IntPolynomial, ExactError> {
    num.exact_divide(den)
}

/// `Rational` from a pair of machine integers.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}
