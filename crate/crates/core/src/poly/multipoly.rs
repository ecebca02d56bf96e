use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use super::coeff::Coefficient;
use super::monomial::Monomial;
use super::var::VarName;
use crate::exact::Rational;

/// Sparse multivariate polynomial. Zero coefficients are never stored.
#[derive(Clone)]
pub struct MultiPoly<C: Coefficient> {
    domain: C::Domain,
    terms: BTreeMap<Monomial, C>,
}

/// Polynomial with rational coefficients.
pub type QPoly = MultiPoly<Rational>;

/// Raised by [`MultiPoly::exact_divide`]; carries the division remainder.
#[derive(Clone, Debug, PartialEq)]
pub struct NotDivisible<C: Coefficient> {
    pub remainder: MultiPoly<C>,
}

impl<C: Coefficient> fmt::Display for NotDivisible<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not divisible (remainder {})", self.remainder)
    }
}

impl<C: Coefficient> MultiPoly<C> {
    pub fn zero(domain: &C::Domain) -> Self {
        MultiPoly { domain: domain.clone(), terms: BTreeMap::new() }
    }

    pub fn one(domain: &C::Domain) -> Self {
        Self::constant(domain, C::one_in(domain))
    }

    pub fn constant(domain: &C::Domain, c: C) -> Self {
        Self::term(domain, Monomial::one(), c)
    }

    pub fn var(domain: &C::Domain, v: VarName) -> Self {
        Self::term(domain, Monomial::var(v), C::one_in(domain))
    }

    pub fn term(domain: &C::Domain, m: Monomial, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { domain: domain.clone(), terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, C)>>(domain: &C::Domain, it: I) -> Self {
        let mut p = Self::zero(domain);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn domain(&self) -> &C::Domain {
        &self.domain
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&C> {
        self.terms.get(m)
    }

    /// The constant value, if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero_in(&self.domain)),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.leading_term().map(|(m, _)| m.degree())
    }

    pub fn degree_in(&self, v: &VarName) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<VarName> {
        self.terms.keys().flat_map(|m| m.factors().iter().map(|(v, _)| v.clone())).collect()
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add_ref(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.domain);
        }
        MultiPoly {
            domain: self.domain.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a.mul_ref(c))).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.domain);
        }
        MultiPoly {
            domain: self.domain.clone(),
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a.mul_ref(c))).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one(&self.domain);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Quotient `q` with `self = q * divisor`, by multivariate division on
    /// leading terms. Fails with the full division remainder otherwise.
    pub fn exact_divide(&self, divisor: &Self) -> Result<Self, NotDivisible<C>> {
        let (lead_m, lead_c) = divisor.leading_term().expect("exact_divide by zero polynomial");
        let lead_inv = lead_c.try_inv().expect("coefficient domain is a field");
        let mut rest = self.clone();
        let mut quot = Self::zero(&self.domain);
        let mut remainder = Self::zero(&self.domain);
        while let Some((m, c)) = rest.terms.pop_last() {
            match m.div(lead_m) {
                Some(qm) => {
                    let qc = c.mul_ref(&lead_inv);
                    // the leading term cancels by construction; subtract the tail
                    for (dm, dc) in divisor.terms.iter().rev().skip(1) {
                        rest.add_term(qm.mul(dm), qc.mul_ref(dc).neg_ref());
                    }
                    quot.add_term(qm, qc);
                }
                None => remainder.add_term(m, c),
            }
        }
        if remainder.is_zero() {
            Ok(quot)
        } else {
            Err(NotDivisible { remainder })
        }
    }

    /// Simultaneous substitution; variables absent from `sigma` are kept.
    pub fn substitute(&self, sigma: &BTreeMap<VarName, MultiPoly<C>>) -> Self {
        let mut out = Self::zero(&self.domain);
        let mut powers: BTreeMap<(VarName, u32), MultiPoly<C>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut acc = Self::constant(&self.domain, c.clone());
            for (v, e) in m.factors() {
                match sigma.get(v) {
                    Some(image) => {
                        let p = powers.entry((v.clone(), *e)).or_insert_with(|| image.pow(*e));
                        acc = &acc * p;
                    }
                    None => kept.push((v.clone(), *e)),
                }
            }
            let kept = Monomial::from_factors(kept);
            for (am, ac) in acc.terms {
                out.add_term(am.mul(&kept), ac);
            }
        }
        out
    }

    /// Renames variables; a special case of [`substitute`](Self::substitute).
    pub fn rename(&self, map: &BTreeMap<VarName, VarName>) -> Self {
        let sigma = map.iter().map(|(k, v)| (k.clone(), Self::var(&self.domain, v.clone()))).collect();
        self.substitute(&sigma)
    }

    /// Evaluates at a point given by `value`; `None` if some variable is
    /// unassigned.
    pub fn evaluate<F: FnMut(&VarName) -> Option<C>>(&self, mut value: F) -> Option<C> {
        let mut cache: BTreeMap<VarName, C> = BTreeMap::new();
        let mut sum = C::zero_in(&self.domain);
        for (m, c) in &self.terms {
            let mut acc = c.clone();
            for (v, e) in m.factors() {
                let x = match cache.get(v) {
                    Some(x) => x.clone(),
                    None => {
                        let x = value(v)?;
                        cache.insert(v.clone(), x.clone());
                        x
                    }
                };
                for _ in 0..*e {
                    acc = acc.mul_ref(&x);
                }
            }
            sum = sum.add_ref(&acc);
        }
        Some(sum)
    }

    /// Coefficient-wise change of domain; `None` if some coefficient has no
    /// image.
    pub fn try_map<D: Coefficient, F: FnMut(&C) -> Option<D>>(
        &self,
        domain: &D::Domain,
        mut f: F,
    ) -> Option<MultiPoly<D>> {
        let mut out = MultiPoly::zero(domain);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c)?);
        }
        Some(out)
    }
}

impl QPoly {
    pub fn rational_zero() -> Self {
        Self::zero(&())
    }

    pub fn rational_one() -> Self {
        Self::one(&())
    }

    pub fn int(n: i64) -> Self {
        Self::constant(&(), crate::exact::integer(n))
    }

    pub fn rational_var(v: VarName) -> Self {
        Self::var(&(), v)
    }

    /// Image under any coefficient domain containing the rationals.
    pub fn lift<D: Coefficient>(&self, domain: &D::Domain) -> Option<MultiPoly<D>> {
        self.try_map(domain, |c| D::from_rational_in(domain, c))
    }
}

impl<C: Coefficient> PartialEq for MultiPoly<C> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl<C: Coefficient> fmt::Debug for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

/// Canonical text: terms in descending graded-lex order, e.g.
/// `x1^3 - 1/2*x1 + 3`. The output parses back to the same polynomial.
impl<C: Coefficient> fmt::Display for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let r = c.repr();
            match (k, r.negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                f.write_str(&r.body)?;
            } else if r.body == "1" {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", r.body)?;
            }
        }
        Ok(())
    }
}

impl<C: Coefficient> Add for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn add(self, rhs: &MultiPoly<C>) -> MultiPoly<C> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<C: Coefficient> Sub for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn sub(self, rhs: &MultiPoly<C>) -> MultiPoly<C> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.neg_ref());
        }
        out
    }
}

impl<C: Coefficient> Neg for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn neg(self) -> MultiPoly<C> {
        MultiPoly {
            domain: self.domain.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg_ref())).collect(),
        }
    }
}

impl<C: Coefficient> Mul for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn mul(self, rhs: &MultiPoly<C>) -> MultiPoly<C> {
        let mut out = MultiPoly::zero(&self.domain);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.mul_ref(cb));
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl<C: Coefficient> $tr for MultiPoly<C> {
            type Output = MultiPoly<C>;
            fn $method(self, rhs: MultiPoly<C>) -> MultiPoly<C> {
                (&self).$method(&rhs)
            }
        }
        impl<C: Coefficient> $tr<&MultiPoly<C>> for MultiPoly<C> {
            type Output = MultiPoly<C>;
            fn $method(self, rhs: &MultiPoly<C>) -> MultiPoly<C> {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Coefficient> Neg for MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn neg(self) -> MultiPoly<C> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse;
    use alloc::string::ToString;

    fn p(s: &str) -> QPoly {
        parse(s).unwrap()
    }

    #[test]
    fn square_of_binomial() {
        assert_eq!(p("x + 1").pow(2), p("x^2 + 2*x + 1"));
        assert_eq!(p("x + 1").pow(0), QPoly::rational_one());
    }

    #[test]
    fn exact_division() {
        assert_eq!(p("x^2 - 1").exact_divide(&p("x - 1")).unwrap(), p("x + 1"));
        let err = p("x^2 + 1").exact_divide(&p("x - 1")).unwrap_err();
        assert_eq!(err.remainder, QPoly::int(2));
        let a = p("x[1][1]^3*w[1][1] - w[1][1]*x[2][1] + 2*x[1][1]^2 - 2*x[2][1]");
        let b = p("x[1][1]^3 - x[2][1]");
        // a = (w + 2) * b only if the x1^2 term matches; it does not
        assert!(a.exact_divide(&b).is_err());
        let c = &b * &p("w[1][1] + 2*x[1][1]^2");
        assert_eq!(c.exact_divide(&b).unwrap(), p("w[1][1] + 2*x[1][1]^2"));
    }

    #[test]
    fn substitution_is_simultaneous() {
        let sigma: BTreeMap<_, _> = [(VarName::named("x"), p("x^2"))].into_iter().collect();
        // `x` parses to the structured stem, so build the map with it
        let x = VarName::indexed(crate::poly::Stem::X, &[]);
        let sx: BTreeMap<_, _> = [(x.clone(), p("x^2"))].into_iter().collect();
        assert_eq!(p("x + 1").substitute(&sx), p("x^2 + 1"));
        assert_eq!(p("x + 1").substitute(&sigma), p("x + 1"));
        let y = VarName::named("y");
        let swap: BTreeMap<_, _> = [(x.clone(), p("y")), (y, p("x"))].into_iter().collect();
        assert_eq!(p("x - y").substitute(&swap), p("y - x"));
        let w = VarName::indexed(crate::poly::Stem::W, &[]);
        let sw: BTreeMap<_, _> = [(w, p("x^3 + 1"))].into_iter().collect();
        assert_eq!(p("w^2").substitute(&sw), p("x^3 + 1").pow(2));
    }

    #[test]
    fn formatting() {
        assert_eq!(QPoly::rational_zero().to_string(), "0");
        assert_eq!(p("-x1 + x1^3").to_string(), "x1^3 - x1");
        assert_eq!(p("3 + w2^2*w1/2").to_string(), "1/2*w1*w2^2 + 3");
        assert_eq!(p("1/2").to_string(), "1/2");
        assert_eq!(p("-x^2 - 1").to_string(), "-x^2 - 1");
    }

    #[test]
    fn evaluation() {
        let f = p("x^3 + 1");
        let x = VarName::indexed(crate::poly::Stem::X, &[]);
        let v = f.evaluate(|var| (*var == x).then(|| crate::exact::integer(2)));
        assert_eq!(v, Some(crate::exact::integer(9)));
        assert_eq!(f.evaluate(|_| None), None);
    }
}
