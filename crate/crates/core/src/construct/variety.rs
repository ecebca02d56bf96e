use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::coverring::CoverRelationSystem;
use crate::exact::Rational;
use crate::poly::{Coefficient, Monomial, QPoly, VarName};

/// A quotient of polynomials. Nothing is cancelled; the denominator is only
/// required to be nonzero in whatever ring it is read in.
#[derive(Clone, Debug, PartialEq)]
pub struct Fraction {
    pub num: QPoly,
    pub den: QPoly,
}

impl Fraction {
    pub fn new(num: QPoly, den: QPoly) -> Self {
        Fraction { num, den }
    }

    pub fn poly(num: QPoly) -> Self {
        Fraction { num, den: QPoly::rational_one() }
    }

    pub fn one() -> Self {
        Self::poly(QPoly::rational_one())
    }

    pub fn var(v: VarName) -> Self {
        Self::poly(QPoly::rational_var(v))
    }

    pub fn ratio(num: VarName, den: VarName) -> Self {
        Fraction { num: QPoly::rational_var(num), den: QPoly::rational_var(den) }
    }

    pub fn has_unit_denominator(&self) -> bool {
        self.den.as_constant().is_some_and(|c| c.is_one())
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.has_unit_denominator() {
            return write!(f, "{}", self.num);
        }
        let wrap =
            |p: &QPoly| p.num_terms() > 1 || p.as_constant().is_some_and(|c| c < Rational::from_integer(0.into()));
        match (wrap(&self.num), wrap(&self.den)) {
            (false, false) => write!(f, "{}/{}", self.num, self.den),
            (true, false) => write!(f, "({})/{}", self.num, self.den),
            (false, true) => write!(f, "{}/({})", self.num, self.den),
            (true, true) => write!(f, "({})/({})", self.num, self.den),
        }
    }
}

/// Substitutes fractions for variables and clears denominators: with
/// `D_v = deg_v p`, returns `p(num/den) * prod den_v^{D_v}` over that common
/// denominator.
pub fn substitute_fractions(p: &QPoly, assign: &BTreeMap<VarName, Fraction>) -> Fraction {
    let degrees: BTreeMap<&VarName, u32> = assign.keys().map(|v| (v, p.degree_in(v))).collect();
    let mut powers: BTreeMap<(&VarName, bool, u32), QPoly> = BTreeMap::new();
    let mut power = |v: &VarName, numerator: bool, e: u32| -> QPoly {
        let (key_v, _) = assign.get_key_value(v).expect("assigned variable");
        powers
            .entry((key_v, numerator, e))
            .or_insert_with(|| {
                let fr = &assign[v];
                if numerator {
                    fr.num.pow(e)
                } else {
                    fr.den.pow(e)
                }
            })
            .clone()
    };
    let mut num = QPoly::rational_zero();
    for (m, c) in p.terms() {
        let mut kept = Vec::new();
        let mut acc = QPoly::constant(&(), c.clone());
        for (v, e) in m.factors() {
            if assign.contains_key(v) {
                acc = &acc * &power(v, true, *e);
            } else {
                kept.push((v.clone(), *e));
            }
        }
        for (v, d) in &degrees {
            let e = m.exponent(v);
            if *d > e {
                acc = &acc * &power(v, false, d - e);
            }
        }
        num = &num + &acc.mul_term(&Monomial::from_factors(kept), &Rational::from_integer(1.into()));
    }
    let mut den = QPoly::rational_one();
    for (v, d) in &degrees {
        if *d > 0 {
            den = &den * &power(v, false, *d);
        }
    }
    Fraction { num, den }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("denominator {0} vanishes in the function field")]
    ZeroDenominator(QPoly),
}

/// A computational model of a function field: the cover ring modulo its
/// stratified relations, plus definitions that express derived variables
/// (quotient generators, identified coordinates) in cover-ring variables.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverModel {
    pub relations: CoverRelationSystem<Rational>,
    pub definitions: BTreeMap<VarName, QPoly>,
}

impl CoverModel {
    pub fn new(relations: CoverRelationSystem<Rational>, definitions: BTreeMap<VarName, QPoly>) -> Self {
        CoverModel { relations, definitions }
    }

    /// Replaces defined variables until none remain.
    pub fn expand(&self, p: &QPoly) -> QPoly {
        let mut cur = p.clone();
        for _ in 0..=self.definitions.len() {
            let used: BTreeMap<VarName, QPoly> =
                cur.variables().into_iter().filter_map(|v| self.definitions.get(&v).map(|d| (v, d.clone()))).collect();
            if used.is_empty() {
                return cur;
            }
            cur = cur.substitute(&used);
        }
        panic!("definitions are cyclic");
    }

    pub fn reduce(&self, p: &QPoly) -> QPoly {
        self.relations.normal_form(&self.expand(p))
    }

    pub fn is_zero(&self, p: &QPoly) -> bool {
        self.reduce(p).is_zero()
    }

    /// Reduced numerator of `f`, after checking that its denominator does
    /// not reduce to zero.
    pub fn reduce_fraction(&self, f: &Fraction) -> Result<QPoly, ModelError> {
        if self.is_zero(&f.den) {
            return Err(ModelError::ZeroDenominator(f.den.clone()));
        }
        Ok(self.reduce(&f.num))
    }

    /// Normal form of `p` after substituting `assign`, denominators cleared.
    pub fn reduce_substituted(&self, p: &QPoly, assign: &BTreeMap<VarName, Fraction>) -> Result<QPoly, ModelError> {
        self.reduce_fraction(&substitute_fractions(p, assign))
    }
}

/// An affine variety given by equations, with the model in which its
/// function-field identities are checked. `parameters` are elements of the
/// ground field that appear as constants in the equations.
#[derive(Clone, Debug, PartialEq)]
pub struct PresentedVariety {
    pub name: String,
    pub variables: Vec<VarName>,
    pub parameters: Vec<VarName>,
    pub equations: Vec<QPoly>,
    pub model: CoverModel,
}

impl PresentedVariety {
    /// Variables in the equations that are neither coordinates nor
    /// parameters.
    pub fn stray_variables(&self) -> BTreeSet<VarName> {
        let known: BTreeSet<&VarName> = self.variables.iter().chain(&self.parameters).collect();
        self.equations.iter().flat_map(|e| e.variables()).filter(|v| !known.contains(v)).collect()
    }
}

impl fmt::Display for PresentedVariety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.name)?;
        let vars: Vec<String> = self.variables.iter().map(VarName::to_text).collect();
        writeln!(f, "  coordinates: {}", vars.join(", "))?;
        if !self.parameters.is_empty() {
            let params: Vec<String> = self.parameters.iter().map(VarName::to_text).collect();
            writeln!(f, "  parameters: {}", params.join(", "))?;
        }
        for e in &self.equations {
            writeln!(f, "  {e} = 0")?;
        }
        Ok(())
    }
}

/// A point of a twist, as fractions in the function field of the product.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicPoint {
    pub label: String,
    pub coordinates: Vec<(VarName, Fraction)>,
}

impl SymbolicPoint {
    pub fn assignment(&self) -> BTreeMap<VarName, Fraction> {
        self.coordinates.iter().cloned().collect()
    }
}

impl fmt::Display for SymbolicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = (", self.label)?;
        for (k, (v, c)) in self.coordinates.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v} = {c}")?;
        }
        f.write_str(")")
    }
}
