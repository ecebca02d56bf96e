//! Exact arithmetic: big rationals and cyclotomic field elements.

mod cyclo;
mod cyclotomic;

pub use cyclo::{CycloField, CycloNumber};
pub use cyclotomic::{cyclotomic_polynomial, divisors, totient, IntPoly};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("cyclotomic order must be positive")]
    ZeroOrder,
    #[error("division by zero")]
    DivisionByZero,
    #[error("order {from} does not divide order {to}")]
    NotDivisible { from: u32, to: u32 },
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(n.into())
}
