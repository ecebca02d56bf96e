//! Sparse multivariate polynomials over exact coefficient domains.

mod coeff;
mod monomial;
mod multipoly;
mod parse;
mod var;

pub use coeff::{CoeffRepr, Coefficient};
pub use monomial::Monomial;
pub use multipoly::{MultiPoly, NotDivisible, QPoly};
pub use parse::{parse, parse_in, ParseError, Parsed, UnknownRole};
pub use var::{w, x, z, Indices, Stem, VarName};

use crate::exact::CycloNumber;

/// Polynomial with coefficients in a cyclotomic field.
pub type CycloPoly = MultiPoly<CycloNumber>;
