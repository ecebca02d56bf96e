use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use super::var::VarName;

/// A power product of variables. Exponents are positive and the factor list
/// is sorted by variable, so equal monomials have equal representations.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    factors: Vec<(VarName, u32)>,
    degree: u64,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: VarName) -> Self {
        Monomial { factors: alloc::vec![(v, 1)], degree: 1 }
    }

    pub fn from_factors<I: IntoIterator<Item = (VarName, u32)>>(it: I) -> Self {
        let mut factors: Vec<(VarName, u32)> = it.into_iter().filter(|(_, e)| *e > 0).collect();
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        factors.dedup_by(|b, a| {
            if a.0 == b.0 {
                a.1 += b.1;
                true
            } else {
                false
            }
        });
        let degree = factors.iter().map(|(_, e)| *e as u64).sum();
        Monomial { factors, degree }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn factors(&self) -> &[(VarName, u32)] {
        &self.factors
    }

    pub fn exponent(&self, v: &VarName) -> u32 {
        self.factors.binary_search_by(|(w, _)| w.cmp(v)).map(|i| self.factors[i].1).unwrap_or(0)
    }

    pub fn mul(&self, rhs: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.factors.len() + rhs.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < rhs.factors.len() {
            let (a, ea) = &self.factors[i];
            let (b, eb) = &rhs.factors[j];
            match a.cmp(b) {
                Ordering::Less => {
                    out.push((a.clone(), *ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b.clone(), *eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a.clone(), ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.factors[i..]);
        out.extend_from_slice(&rhs.factors[j..]);
        Monomial { factors: out, degree: self.degree + rhs.degree }
    }

    pub fn pow(&self, e: u32) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        Monomial {
            factors: self.factors.iter().map(|(v, k)| (v.clone(), k * e)).collect(),
            degree: self.degree * e as u64,
        }
    }

    /// `self / rhs` if `rhs` divides `self`.
    pub fn div(&self, rhs: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.factors.len());
        let mut j = 0;
        for (v, e) in &self.factors {
            if j < rhs.factors.len() && rhs.factors[j].0 < *v {
                return None;
            }
            if j < rhs.factors.len() && rhs.factors[j].0 == *v {
                let d = rhs.factors[j].1;
                j += 1;
                match e.cmp(&d) {
                    Ordering::Less => return None,
                    Ordering::Equal => continue,
                    Ordering::Greater => out.push((v.clone(), e - d)),
                }
            } else {
                out.push((v.clone(), *e));
            }
        }
        if j < rhs.factors.len() {
            return None;
        }
        Some(Monomial { factors: out, degree: self.degree - rhs.degree })
    }

    /// Splits off the power of `v`: returns `(exponent, rest)`.
    pub fn split(&self, v: &VarName) -> (u32, Monomial) {
        match self.factors.binary_search_by(|(w, _)| w.cmp(v)) {
            Ok(i) => {
                let mut factors = self.factors.clone();
                let (_, e) = factors.remove(i);
                (e, Monomial { factors, degree: self.degree - e as u64 })
            }
            Err(_) => (0, self.clone()),
        }
    }
}

/// Graded lexicographic order: total degree first, then exponents compared
/// variable by variable in variable order.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| {
            let (a, b) = (&self.factors, &other.factors);
            let (mut i, mut j) = (0, 0);
            loop {
                match (a.get(i), b.get(j)) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                        Ordering::Equal => match ea.cmp(eb) {
                            Ordering::Equal => {
                                i += 1;
                                j += 1;
                            }
                            o => return o,
                        },
                    },
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.factors.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            write!(f, "{v}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::var::{w, x};

    #[test]
    fn grlex() {
        let x1 = Monomial::var(x(1, 1));
        let x2 = Monomial::var(x(2, 1));
        assert!(x1 > x2);
        assert!(x2.pow(2) > x1);
        assert!(x1.mul(&x2) < x1.pow(2));
        assert!(Monomial::one() < x2);
        assert!(x1.mul(&Monomial::var(w(1, 1))) > x2.mul(&Monomial::var(w(1, 1))));
    }

    #[test]
    fn division_and_split() {
        let m = Monomial::from_factors([(x(1, 1), 3), (w(1, 1), 2)]);
        let d = Monomial::from_factors([(x(1, 1), 1), (w(1, 1), 2)]);
        assert_eq!(m.div(&d), Some(Monomial::var(x(1, 1)).pow(2)));
        assert_eq!(d.div(&m), None);
        assert_eq!(m.div(&Monomial::var(x(2, 1))), None);
        let (e, rest) = m.split(&w(1, 1));
        assert_eq!(e, 2);
        assert_eq!(rest, Monomial::var(x(1, 1)).pow(3));
        assert_eq!(m.exponent(&x(1, 1)), 3);
        assert_eq!(m.exponent(&x(2, 1)), 0);
    }

    #[test]
    fn from_factors_merges_duplicates() {
        let m = Monomial::from_factors([(x(1, 1), 1), (w(1, 1), 0), (x(1, 1), 2)]);
        assert_eq!(m, Monomial::var(x(1, 1)).pow(3));
        assert_eq!(m.degree(), 3);
    }
}
