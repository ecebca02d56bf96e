//! Elements of cyclotomic fields `Q(zeta_n)`, stored modulo the `n`-th
//! cyclotomic polynomial in the power basis `1, zeta, ..., zeta^(phi(n)-1)`.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::cyclotomic::{cyclotomic_polynomial, IntPoly};
use super::{ExactError, Rational};

struct FieldData {
    order: u32,
    modulus: IntPoly,
}

/// The field `Q(zeta_n)` for a fixed order `n`.
#[derive(Clone)]
pub struct CycloField(Arc<FieldData>);

impl CycloField {
    pub fn new(order: u32) -> Result<Self, ExactError> {
        let modulus = cyclotomic_polynomial(order)?;
        Ok(CycloField(Arc::new(FieldData { order, modulus })))
    }

    pub fn order(&self) -> u32 {
        self.0.order
    }

    /// `phi(n)`, the dimension over the rationals.
    pub fn degree(&self) -> usize {
        self.0.modulus.coeffs().len() - 1
    }

    pub fn modulus(&self) -> &IntPoly {
        &self.0.modulus
    }

    pub fn zero(&self) -> CycloNumber {
        CycloNumber { field: self.clone(), coeffs: vec![Rational::zero(); self.degree()] }
    }

    pub fn one(&self) -> CycloNumber {
        self.from_rational(Rational::one())
    }

    pub fn from_rational(&self, q: Rational) -> CycloNumber {
        let mut out = self.zero();
        out.coeffs[0] = q;
        out
    }

    pub fn from_integer(&self, n: i64) -> CycloNumber {
        self.from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// The primitive root `zeta_n`.
    pub fn zeta(&self) -> CycloNumber {
        self.zeta_pow(1)
    }

    /// `zeta_n^k`; the exponent is taken modulo `n`.
    pub fn zeta_pow(&self, k: i64) -> CycloNumber {
        let n = self.order() as i64;
        let k = k.rem_euclid(n) as usize;
        let mut raw = vec![Rational::zero(); k + 1];
        raw[k] = Rational::one();
        self.reduce(raw)
    }

    /// Builds an element from arbitrary-length power-basis coefficients.
    pub fn from_power_coeffs(&self, coeffs: Vec<Rational>) -> CycloNumber {
        self.reduce(coeffs)
    }

    fn reduce(&self, mut raw: Vec<Rational>) -> CycloNumber {
        let d = self.degree();
        let phi = self.0.modulus.coeffs();
        if raw.len() > d {
            for k in (d..raw.len()).rev() {
                let c = core::mem::take(&mut raw[k]);
                if c.is_zero() {
                    continue;
                }
                for (i, p) in phi[..d].iter().enumerate() {
                    if !p.is_zero() {
                        raw[k - d + i] -= &c * Rational::from_integer(p.clone());
                    }
                }
            }
            raw.truncate(d);
        } else {
            raw.resize(d, Rational::zero());
        }
        CycloNumber { field: self.clone(), coeffs: raw }
    }
}

impl PartialEq for CycloField {
    fn eq(&self, other: &Self) -> bool {
        self.order() == other.order()
    }
}

impl Eq for CycloField {}

impl fmt::Debug for CycloField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta{})", self.order())
    }
}

/// An element of `Q(zeta_n)`.
#[derive(Clone)]
pub struct CycloNumber {
    field: CycloField,
    coeffs: Vec<Rational>,
}

impl CycloNumber {
    pub fn field(&self) -> &CycloField {
        &self.field
    }

    pub fn order(&self) -> u32 {
        self.field.order()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in the prime field.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(One::is_one)
    }

    /// Image under `zeta_m -> zeta_n^(n/m)` where `m` is the current order.
    pub fn embed(&self, n: u32) -> Result<CycloNumber, ExactError> {
        let m = self.order();
        if n == 0 || !n.is_multiple_of(m) {
            return Err(ExactError::NotDivisible { from: m, to: n });
        }
        if n == m {
            return Ok(self.clone());
        }
        let target = CycloField::new(n)?;
        Ok(self.embed_into(&target))
    }

    fn embed_into(&self, target: &CycloField) -> CycloNumber {
        let step = (target.order() / self.order()) as usize;
        let mut raw = vec![Rational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            raw[k * step] = c.clone();
        }
        target.reduce(raw)
    }

    /// Inverse of [`embed`](Self::embed): writes this element in `Q(zeta_m)`
    /// for `m | n`, if it lies in that subfield.
    pub fn restrict(&self, m: u32) -> Result<Option<CycloNumber>, ExactError> {
        let n = self.order();
        if m == 0 || !n.is_multiple_of(m) {
            return Err(ExactError::NotDivisible { from: m, to: n });
        }
        let small = CycloField::new(m)?;
        let columns: Vec<Vec<Rational>> =
            (0..small.degree()).map(|k| small.zeta_pow(k as i64).embed_into(&self.field).coeffs).collect();
        Ok(solve_linear(&columns, &self.coeffs).map(|c| CycloNumber { field: small, coeffs: c }))
    }

    fn common_pair(&self, rhs: &CycloNumber) -> (CycloNumber, CycloNumber) {
        let n = self.order().lcm(&rhs.order());
        let field = if n == self.order() {
            self.field.clone()
        } else if n == rhs.order() {
            rhs.field.clone()
        } else {
            CycloField::new(n).expect("lcm of positive orders is positive")
        };
        (self.embed_into(&field), rhs.embed_into(&field))
    }

    fn same_field(&self, rhs: &CycloNumber) -> bool {
        self.order() == rhs.order()
    }

    pub fn add(&self, rhs: &CycloNumber) -> CycloNumber {
        if !self.same_field(rhs) {
            let (a, b) = self.common_pair(rhs);
            return a.add(&b);
        }
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        CycloNumber { field: self.field.clone(), coeffs }
    }

    pub fn sub(&self, rhs: &CycloNumber) -> CycloNumber {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> CycloNumber {
        CycloNumber { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, rhs: &CycloNumber) -> CycloNumber {
        if !self.same_field(rhs) {
            let (a, b) = self.common_pair(rhs);
            return a.mul(&b);
        }
        let d = self.coeffs.len();
        let mut raw = vec![Rational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        self.field.reduce(raw)
    }

    pub fn scale(&self, q: &Rational) -> CycloNumber {
        CycloNumber { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    pub fn pow(&self, mut e: u64) -> CycloNumber {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// the (irreducible) modulus. `None` for zero.
    pub fn inv(&self) -> Option<CycloNumber> {
        if self.is_zero() {
            return None;
        }
        let modulus: Vec<Rational> =
            self.field.modulus().coeffs().iter().map(|c| Rational::from_integer(c.clone())).collect();
        let (mut r0, mut r1) = (modulus, trim(self.coeffs.clone()));
        let (mut s0, mut s1) = (Vec::new(), vec![Rational::one()]);
        while !r1.is_empty() {
            let (q, r) = upoly_div_rem(&r0, &r1);
            let s2 = upoly_sub(&s0, &upoly_mul(&q, &s1));
            r0 = core::mem::replace(&mut r1, r);
            s0 = core::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant because the modulus is irreducible.
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].clone();
        let scaled = s0.into_iter().map(|s| s / &c).collect();
        Some(self.field.reduce(scaled))
    }

    pub fn div(&self, rhs: &CycloNumber) -> Result<CycloNumber, ExactError> {
        let inv = rhs.inv().ok_or(ExactError::DivisionByZero)?;
        Ok(self.mul(&inv))
    }
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.same_field(other) {
            self.coeffs == other.coeffs
        } else {
            let (a, b) = self.common_pair(other);
            a.coeffs == b.coeffs
        }
    }
}

impl Eq for CycloNumber {}

impl fmt::Debug for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in Q(zeta{})", self, self.order())
    }
}

/// Prints as a polynomial in the token `zeta<n>`, highest power first,
/// e.g. `2*zeta5^3 - zeta5 + 1/2`.
impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            if k == 0 {
                write!(f, "{abs}")?;
                continue;
            }
            if !abs.is_one() {
                write!(f, "{abs}*")?;
            }
            write!(f, "zeta{}", self.order())?;
            if k > 1 {
                write!(f, "^{k}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn upoly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim(out)
}

fn upoly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn upoly_div_rem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lead = &b[db];
    if rem.len() <= db {
        return (Vec::new(), trim(rem));
    }
    let mut quot = vec![Rational::zero(); rem.len() - db];
    for k in (db..rem.len()).rev() {
        let c = core::mem::take(&mut rem[k]) / lead;
        if c.is_zero() {
            continue;
        }
        for (i, p) in b[..db].iter().enumerate() {
            rem[k - db + i] -= &c * p;
        }
        quot[k - db] = c;
    }
    rem.truncate(db);
    (trim(quot), trim(rem))
}

/// Solves `sum_k x_k * columns[k] = target` exactly; `None` if inconsistent.
/// Columns are assumed linearly independent.
fn solve_linear(columns: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let rows = target.len();
    let cols = columns.len();
    // augmented matrix, row-major
    let mut m: Vec<Vec<Rational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Rational> = columns.iter().map(|c| c[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::with_capacity(cols);
    for c in 0..cols {
        let Some(p) = (pivot_row..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, p);
        let lead = m[pivot_row][c].clone();
        for v in m[pivot_row].iter_mut() {
            *v /= &lead;
        }
        for r in 0..rows {
            if r != pivot_row && !m[r][c].is_zero() {
                let factor = m[r][c].clone();
                #[allow(clippy::needless_range_loop)]
                for k in 0..=cols {
                    let delta = &factor * &m[pivot_row][k];
                    m[r][k] -= delta;
                }
            }
        }
        pivots.push(c);
        pivot_row += 1;
    }
    if m[pivot_row..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][cols].clone();
    }
    Some(x)
}
