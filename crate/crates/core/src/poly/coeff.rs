use alloc::format;
use alloc::string::{String, ToString};
use core::fmt::Debug;

use num_traits::{One, Signed, Zero};

use crate::exact::{CycloField, CycloNumber, Rational};

/// How a coefficient renders in front of a monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffRepr {
    pub negative: bool,
    /// Absolute value as text; `"1"` for units that should be elided.
    pub body: String,
    /// Whether `body` is a product-safe single factor (no parentheses needed).
    pub atomic: bool,
}

/// A commutative coefficient ring with a runtime domain tag.
///
/// Every coefficient of a [`MultiPoly`](super::MultiPoly) shares one domain,
/// so constants such as zero and one are constructed from the domain.
pub trait Coefficient: Clone + PartialEq + Debug {
    type Domain: Clone + PartialEq + Debug;

    fn zero_in(domain: &Self::Domain) -> Self;
    fn one_in(domain: &Self::Domain) -> Self;
    /// `None` when the rational has no image in the domain (e.g. the
    /// denominator vanishes modulo a prime).
    fn from_rational_in(domain: &Self::Domain, q: &Rational) -> Option<Self>;
    /// The primitive root `zeta_n`, when the domain contains it.
    fn zeta_in(_domain: &Self::Domain, _n: u32) -> Option<Self> {
        None
    }

    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn try_inv(&self) -> Option<Self>;

    fn repr(&self) -> CoeffRepr;
}

impl Coefficient for Rational {
    type Domain = ();

    fn zero_in(_: &()) -> Self {
        Rational::zero()
    }
    fn one_in(_: &()) -> Self {
        Rational::one()
    }
    fn from_rational_in(_: &(), q: &Rational) -> Option<Self> {
        Some(q.clone())
    }
    fn zeta_in(_: &(), n: u32) -> Option<Self> {
        match n {
            1 => Some(Rational::one()),
            2 => Some(-Rational::one()),
            _ => None,
        }
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn try_inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn repr(&self) -> CoeffRepr {
        CoeffRepr { negative: self.is_negative(), body: self.abs().to_string(), atomic: true }
    }
}

impl Coefficient for CycloNumber {
    type Domain = CycloField;

    fn zero_in(domain: &CycloField) -> Self {
        domain.zero()
    }
    fn one_in(domain: &CycloField) -> Self {
        domain.one()
    }
    fn from_rational_in(domain: &CycloField, q: &Rational) -> Option<Self> {
        Some(domain.from_rational(q.clone()))
    }
    fn zeta_in(domain: &CycloField, n: u32) -> Option<Self> {
        let order = domain.order();
        (n > 0 && order.is_multiple_of(n)).then(|| domain.zeta_pow((order / n) as i64))
    }
    fn is_zero(&self) -> bool {
        CycloNumber::is_zero(self)
    }
    fn is_one(&self) -> bool {
        CycloNumber::is_one(self)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.sub(rhs)
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv()
    }
    fn repr(&self) -> CoeffRepr {
        if let Some(q) = self.as_rational() {
            return q.repr();
        }
        let nonzero: alloc::vec::Vec<_> =
            self.coeffs().iter().enumerate().filter(|(_, c)| !Zero::is_zero(*c)).collect();
        if let [(k, c)] = nonzero[..] {
            let mut body = String::new();
            if !One::is_one(&c.abs()) {
                body.push_str(&format!("{}*", c.abs()));
            }
            body.push_str(&format!("zeta{}", self.order()));
            if k > 1 {
                body.push_str(&format!("^{k}"));
            }
            return CoeffRepr { negative: c.is_negative(), body, atomic: true };
        }
        CoeffRepr { negative: false, body: format!("({self})"), atomic: false }
    }
}
