//! Numerical cross-check over small prime fields: sample genuine points of
//! the product, push them through the symbolic points, and evaluate the
//! twist equations.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;

use crate::construct::{Construction, CoverModel, Fraction};
use crate::coverring::CoverRelationSystem;
use crate::exact::Rational;
use crate::poly::{CoeffRepr, Coefficient, MultiPoly, QPoly, VarName};

/// An element of `F_p`, stored reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    pub fn new(value: i64, modulus: u64) -> Self {
        Fp { value: value.rem_euclid(modulus as i64) as u64, modulus }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp { value: 1 % self.modulus, modulus: self.modulus };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            base = base.mul_ref(&base);
            e >>= 1;
        }
        acc
    }
}

impl Coefficient for Fp {
    type Domain = u64;

    fn zero_in(p: &u64) -> Self {
        Fp { value: 0, modulus: *p }
    }
    fn one_in(p: &u64) -> Self {
        Fp { value: 1 % p, modulus: *p }
    }
    fn from_rational_in(p: &u64, q: &Rational) -> Option<Self> {
        let m = num_bigint::BigInt::from(*p);
        let num = q.numer().mod_floor(&m).to_u64()?;
        let den = q.denom().mod_floor(&m).to_u64()?;
        let den = Fp { value: den, modulus: *p }.try_inv()?;
        Some(Fp { value: num, modulus: *p }.mul_ref(&den))
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn is_one(&self) -> bool {
        self.value == 1
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        Fp { value: (self.value + rhs.value) % self.modulus, modulus: self.modulus }
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        Fp { value: (self.value + self.modulus - rhs.value) % self.modulus, modulus: self.modulus }
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        let v = (self.value as u128 * rhs.value as u128) % self.modulus as u128;
        Fp { value: v as u64, modulus: self.modulus }
    }
    fn neg_ref(&self) -> Self {
        Fp { value: (self.modulus - self.value) % self.modulus, modulus: self.modulus }
    }
    fn try_inv(&self) -> Option<Self> {
        if self.value == 0 {
            return None;
        }
        let g = (self.value as i128).extended_gcd(&(self.modulus as i128));
        (g.gcd == 1).then(|| Fp::new(g.x.rem_euclid(self.modulus as i128) as i64, self.modulus))
    }
    fn repr(&self) -> CoeffRepr {
        CoeffRepr { negative: false, body: self.value.to_string(), atomic: true }
    }
}

pub type FpPoly = MultiPoly<Fp>;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FfError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime {p} divides the layer order {n}")]
    BadPrime { p: u64, n: u32 },
    #[error("a coefficient has a denominator divisible by {0}")]
    BadReduction(u64),
    #[error("no point found within {0} trials")]
    Exhausted(u32),
    #[error("coordinate {coordinate} of {point} has a vanishing denominator at this sample")]
    ZeroDenominator { point: String, coordinate: String },
    #[error("enumeration needs {needed} tuples, above the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("variable {0} has no value in the sample")]
    Unassigned(VarName),
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// An assignment over `F_p` satisfying every relation it was drawn for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FFSample {
    pub prime: u64,
    pub values: BTreeMap<VarName, u64>,
}

impl FFSample {
    pub fn new(prime: u64, values: BTreeMap<VarName, u64>) -> Self {
        FFSample { prime, values }
    }

    /// Evaluates `p`, filling in defined variables from `model`.
    pub fn eval(&self, p: &QPoly, model: &CoverModel) -> Result<Fp, FfError> {
        let lifted = reduce_poly(p, self.prime)?;
        let mut missing = None;
        let out = lifted.evaluate(|v| match self.lookup(v, model) {
            Ok(x) => Some(x),
            Err(e) => {
                missing.get_or_insert(e);
                None
            }
        });
        match (out, missing) {
            (Some(x), _) => Ok(x),
            (None, Some(e)) => Err(e),
            (None, None) => Err(FfError::BadReduction(self.prime)),
        }
    }

    fn lookup(&self, v: &VarName, model: &CoverModel) -> Result<Fp, FfError> {
        if let Some(&x) = self.values.get(v) {
            return Ok(Fp { value: x, modulus: self.prime });
        }
        match model.definitions.get(v) {
            Some(def) => self.eval(def, model),
            None => Err(FfError::Unassigned(v.clone())),
        }
    }

    /// Every relation `head^e = rhs` holds at the sample.
    pub fn satisfies(&self, relations: &CoverRelationSystem<Rational>) -> Result<bool, FfError> {
        let model = CoverModel::new(CoverRelationSystem::empty(), BTreeMap::new());
        for r in relations.relations() {
            if !self.eval(&r.generator(), &model)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn eval_fraction(&self, f: &Fraction, model: &CoverModel) -> Result<Option<Fp>, FfError> {
        let den = self.eval(&f.den, model)?;
        match den.try_inv() {
            Some(inv) => Ok(Some(self.eval(&f.num, model)?.mul_ref(&inv))),
            None => Ok(None),
        }
    }
}

/// Reduces rational coefficients modulo `p`.
pub fn reduce_poly(p: &QPoly, prime: u64) -> Result<FpPoly, FfError> {
    p.lift::<Fp>(&prime).ok_or(FfError::BadReduction(prime))
}

/// The prime must be a prime not dividing any layer order, and every
/// coefficient of the construction must reduce.
pub fn check_prime(c: &Construction, p: u64) -> Result<(), FfError> {
    if !is_prime(p) {
        return Err(FfError::NotPrime(p));
    }
    for e in &c.exponents {
        if (e.n as u64).is_multiple_of(p) {
            return Err(FfError::BadPrime { p, n: e.n });
        }
    }
    let model = sampling_model(c);
    let mut polys: Vec<&QPoly> = model.relations.relations().iter().map(|r| &r.rhs).collect();
    polys.extend(model.definitions.values());
    if let Some(t) = &c.twist {
        polys.extend(&t.variety.equations);
        polys.extend(t.trivialization.values().flat_map(|f| [&f.num, &f.den]));
    }
    for pt in &c.points {
        polys.extend(pt.coordinates.iter().flat_map(|(_, f)| [&f.num, &f.den]));
    }
    for q in polys {
        reduce_poly(q, p)?;
    }
    Ok(())
}

fn sampling_model(c: &Construction) -> &CoverModel {
    match &c.twist {
        Some(t) => &t.variety.model,
        None => &c.product.model,
    }
}

/// All `y` in `F_p` with `y^e = v`.
pub fn roots(v: Fp, e: u32) -> Vec<Fp> {
    (0..v.modulus).map(|y| Fp { value: y, modulus: v.modulus }).filter(|y| y.pow(e as u64) == v).collect()
}

/// Groups variables that are tied together by some relation.
fn components(relations: &CoverRelationSystem<Rational>) -> Vec<BTreeSet<VarName>> {
    let mut comps: Vec<BTreeSet<VarName>> = Vec::new();
    for r in relations.relations() {
        let mut group: BTreeSet<VarName> = r.rhs.variables();
        group.insert(r.head.clone());
        let (joined, rest): (Vec<_>, Vec<_>) = comps.into_iter().partition(|c| !c.is_disjoint(&group));
        for c in joined {
            group.extend(c);
        }
        comps = rest;
        comps.push(group);
    }
    comps
}

/// Draws a point of the variety cut out by `relations`: free variables at
/// random, each head as a random root of its relation. Every connected
/// group of variables gets `trials` attempts.
pub fn sample_relations<R: Rng + ?Sized>(
    relations: &CoverRelationSystem<Rational>,
    p: u64,
    trials: u32,
    rng: &mut R,
) -> Result<FFSample, FfError> {
    let heads: BTreeSet<VarName> = relations.relations().iter().map(|r| r.head.clone()).collect();
    let mut ordered: Vec<_> = relations.relations().iter().collect();
    ordered.sort_by_key(|r| relations.level(&r.head));
    let empty = CoverModel::new(CoverRelationSystem::empty(), BTreeMap::new());
    let mut values = BTreeMap::new();
    for comp in components(relations) {
        let mut done = false;
        for _ in 0..trials {
            let mut trial = FFSample::new(p, values.clone());
            for v in comp.iter().filter(|v| !heads.contains(*v)) {
                trial.values.insert(v.clone(), rng.random_range(0..p));
            }
            let mut ok = true;
            for r in ordered.iter().filter(|r| comp.contains(&r.head)) {
                let rhs = trial.eval(&r.rhs, &empty)?;
                let rs = roots(rhs, r.exponent);
                if rs.is_empty() {
                    ok = false;
                    break;
                }
                let pick = rs[rng.random_range(0..rs.len())];
                trial.values.insert(r.head.clone(), pick.value);
            }
            if ok {
                values = trial.values;
                done = true;
                break;
            }
        }
        if !done {
            return Err(FfError::Exhausted(trials));
        }
    }
    Ok(FFSample::new(p, values))
}

/// A point on every copy of the cover (and on the single cover) over
/// `F_p`.
pub fn sample_cover_point<R: Rng + ?Sized>(
    c: &Construction,
    p: u64,
    trials: u32,
    rng: &mut R,
) -> Result<FFSample, FfError> {
    check_prime(c, p)?;
    sample_relations(&sampling_model(c).relations, p, trials, rng)
}

/// Coordinates of each constructed point at the sample.
pub fn point_values(sample: &FFSample, c: &Construction) -> Result<Vec<BTreeMap<VarName, Fp>>, FfError> {
    let model = sampling_model(c);
    let mut out = Vec::new();
    for pt in &c.points {
        let mut coords = BTreeMap::new();
        for (v, f) in &pt.coordinates {
            let value = sample
                .eval_fraction(f, model)?
                .ok_or_else(|| FfError::ZeroDenominator { point: pt.label.clone(), coordinate: v.to_text() })?;
            coords.insert(v.clone(), value);
        }
        out.push(coords);
    }
    Ok(out)
}

fn eval_with(eq: &QPoly, sample: &FFSample, model: &CoverModel, coords: &BTreeMap<VarName, Fp>) -> Result<Fp, FfError> {
    let mut extended = sample.clone();
    for (v, x) in coords {
        extended.values.insert(v.clone(), x.value());
    }
    extended.eval(eq, model)
}

/// Substitutes the sample into every constructed point and evaluates every
/// twist equation; true iff all vanish. A construction without twist
/// equations passes vacuously.
pub fn check_twist_point_ff(sample: &FFSample, c: &Construction) -> Result<bool, FfError> {
    let Some(twist) = &c.twist else {
        return Ok(true);
    };
    let model = &twist.variety.model;
    for coords in point_values(sample, c)? {
        for eq in &twist.variety.equations {
            if !eval_with(eq, sample, model, &coords)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The twist equations at the sampled ratios of the trivialization.
pub fn check_trivialization_ff(sample: &FFSample, c: &Construction) -> Result<bool, FfError> {
    let Some(twist) = &c.twist else {
        return Ok(true);
    };
    let model = &twist.variety.model;
    let mut coords = BTreeMap::new();
    for (v, f) in &twist.trivialization {
        let value = sample
            .eval_fraction(f, model)?
            .ok_or_else(|| FfError::ZeroDenominator { point: "trivialization".into(), coordinate: v.to_text() })?;
        coords.insert(v.clone(), value);
    }
    for eq in &twist.variety.equations {
        if !eval_with(eq, sample, model, &coords)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub count: u64,
    pub solutions: Vec<Vec<u64>>,
}

/// Counts the common zeros of `eqs` in `F_p^{vars}` by trying every tuple.
pub fn enumerate_solutions(eqs: &[FpPoly], p: u64, vars: &[VarName], budget: u64) -> Result<Enumeration, FfError> {
    let needed = (p as u128).checked_pow(vars.len() as u32).unwrap_or(u128::MAX);
    if needed > budget as u128 {
        return Err(FfError::BudgetExceeded { needed, budget });
    }
    let index: BTreeMap<&VarName, usize> = vars.iter().enumerate().map(|(k, v)| (v, k)).collect();
    let mut tuple = alloc::vec![0u64; vars.len()];
    let mut out = Enumeration { count: 0, solutions: Vec::new() };
    loop {
        let mut ok = true;
        for eq in eqs {
            let value = eq.evaluate(|v| index.get(v).map(|&k| Fp { value: tuple[k], modulus: p }));
            match value {
                Some(x) if x.is_zero() => {}
                Some(_) => {
                    ok = false;
                    break;
                }
                None => {
                    let v = eq.variables().into_iter().find(|v| !index.contains_key(v)).expect("missing variable");
                    return Err(FfError::Unassigned(v));
                }
            }
        }
        if ok {
            out.count += 1;
            out.solutions.push(tuple.clone());
        }
        let mut k = 0;
        loop {
            if k == tuple.len() {
                return Ok(out);
            }
            tuple[k] += 1;
            if tuple[k] < p {
                break;
            }
            tuple[k] = 0;
            k += 1;
        }
    }
}

pub const MAX_DRAWS_PER_SAMPLE: u32 = 50;

/// Sampling statistics over one prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeTally {
    pub prime: u64,
    pub samples: u32,
    pub passed: u32,
    /// Samples dropped because some denominator vanished.
    pub rejected: u32,
    pub exhausted: bool,
}

impl PrimeTally {
    pub fn all_passed(&self) -> bool {
        self.passed == self.samples
    }
}

/// Draws `samples` valid samples at `p`, checking both the points and the
/// trivialization on each. Samples with a vanishing denominator are
/// redrawn, up to [`MAX_DRAWS_PER_SAMPLE`] draws per requested sample.
pub fn tally<R: Rng + ?Sized>(c: &Construction, p: u64, samples: u32, rng: &mut R) -> Result<PrimeTally, FfError> {
    check_prime(c, p)?;
    let mut t = PrimeTally { prime: p, samples: 0, passed: 0, rejected: 0, exhausted: false };
    let mut draws = 0u32;
    while t.samples < samples && draws < samples.saturating_mul(MAX_DRAWS_PER_SAMPLE).max(1) {
        draws += 1;
        let sample = match sample_cover_point(c, p, 1000, rng) {
            Ok(s) => s,
            Err(FfError::Exhausted(_)) => {
                t.exhausted = true;
                break;
            }
            Err(e) => return Err(e),
        };
        let points = check_twist_point_ff(&sample, c);
        let triv = check_trivialization_ff(&sample, c);
        match (points, triv) {
            (Err(FfError::ZeroDenominator { .. }), _) | (_, Err(FfError::ZeroDenominator { .. })) => t.rejected += 1,
            (Err(e), _) | (_, Err(e)) => return Err(e),
            (Ok(a), Ok(b)) => {
                t.samples += 1;
                if a && b {
                    t.passed += 1;
                }
            }
        }
    }
    Ok(t)
}

/// Human-readable one-liner for a tally.
pub fn describe(t: &PrimeTally) -> String {
    let ratio = if t.samples == 0 {
        String::from("n/a")
    } else {
        format!("{:.1}%", 100.0 * t.passed as f64 / t.samples as f64)
    };
    format!("p = {}: {} samples, {} passed ({}), {} rejected", t.prime, t.samples, t.passed, ratio, t.rejected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{abelian_construction, dihedral_pipeline, AbelianCoverSpec, DihedralCoverSpec};
    use crate::poly::{parse, Stem};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cyclic(m: u32) -> Construction {
        abelian_construction(&AbelianCoverSpec::parse(1, &[(2, "x^3 + 1")], m).unwrap()).unwrap()
    }

    fn xv(i: u32) -> VarName {
        VarName::indexed(Stem::X, &[i, 1])
    }

    fn wv(i: u32) -> VarName {
        VarName::indexed(Stem::W, &[i, 1])
    }

    #[test]
    fn field_arithmetic() {
        let a = Fp::new(3, 7);
        assert_eq!(a.pow(2).value(), 2);
        assert_eq!(a.try_inv().unwrap().value(), 5);
        assert_eq!(Fp::new(-1, 7).value(), 6);
        let half = Fp::from_rational_in(&7, &crate::exact::rational(1, 2)).unwrap();
        assert_eq!(half.value(), 4);
        assert!(Fp::from_rational_in(&7, &crate::exact::rational(1, 7)).is_none());
    }

    #[test]
    fn square_roots_mod_seven() {
        // f(2) = 9 = 2 mod 7 and 3^2 = 4^2 = 2
        let rs: Vec<u64> = roots(Fp::new(2, 7), 2).into_iter().map(Fp::value).collect();
        assert_eq!(rs, [3, 4]);
        assert!(roots(Fp::new(3, 7), 2).is_empty());
    }

    #[test]
    fn worked_sample() {
        let c = cyclic(2);
        let values = [(xv(1), 2), (wv(1), 3), (xv(2), 0), (wv(2), 1)].into_iter().collect();
        let sample = FFSample::new(7, values);
        assert!(sample.satisfies(&c.product.model.relations).unwrap());
        let coords = point_values(&sample, &c).unwrap();
        let z = VarName::indexed(Stem::BigZ, &[1]);
        assert_eq!(coords[1][&z].value(), 5);
        assert!(check_twist_point_ff(&sample, &c).unwrap());
        let mut bad = sample.clone();
        bad.values.insert(wv(2), 2);
        assert!(!check_twist_point_ff(&bad, &c).unwrap());
    }

    #[test]
    fn bad_primes() {
        let c = cyclic(2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(sample_cover_point(&c, 2, 10, &mut rng), Err(FfError::BadPrime { p: 2, n: 2 }));
        assert_eq!(sample_cover_point(&c, 9, 10, &mut rng), Err(FfError::NotPrime(9)));
        let half = abelian_construction(&AbelianCoverSpec::parse(1, &[(2, "x/5 + 1")], 2).unwrap()).unwrap();
        assert_eq!(sample_cover_point(&half, 5, 10, &mut rng), Err(FfError::BadReduction(5)));
    }

    #[test]
    fn exhausted_without_roots() {
        // 3 is a non-residue mod 7, so w^2 = 3 has no solution
        let c = abelian_construction(&AbelianCoverSpec::parse(1, &[(2, "3")], 2).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(sample_cover_point(&c, 7, 20, &mut rng), Err(FfError::Exhausted(20)));
    }

    #[test]
    fn samples_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let c = cyclic(3);
        let t = tally(&c, 11, 50, &mut rng).unwrap();
        assert_eq!(t.samples, 50);
        assert!(t.all_passed());
        let d = dihedral_pipeline(&DihedralCoverSpec::parse(3, "x^3 + 1", "x^2 + x + 1", 2).unwrap()).unwrap();
        let t = tally(&d, 13, 30, &mut rng).unwrap();
        assert!(t.samples > 0 && t.all_passed(), "{t:?}");
    }

    #[test]
    fn enumeration() {
        let eq = reduce_poly(&parse("w^2 - x").unwrap(), 3).unwrap();
        let vars = [VarName::indexed(Stem::W, &[]), VarName::indexed(Stem::X, &[])];
        assert_eq!(enumerate_solutions(&[eq], 3, &vars, DEFAULT_BUDGET).unwrap().count, 3);
        assert_eq!(enumerate_solutions(&[], 5, &vars, DEFAULT_BUDGET).unwrap().count, 25);
        let one = reduce_poly(&QPoly::rational_one(), 5).unwrap();
        assert_eq!(enumerate_solutions(&[one], 5, &vars, DEFAULT_BUDGET).unwrap().count, 0);
        assert!(matches!(enumerate_solutions(&[], 101, &vars, 100), Err(FfError::BudgetExceeded { .. })));
    }
}
