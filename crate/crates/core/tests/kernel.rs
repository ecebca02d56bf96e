use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twistcover_core::coverring::{CoverRelation, CoverRelationSystem};
use twistcover_core::exact::{cyclotomic_polynomial, divisors, rational, CycloField, CycloNumber, IntPoly, Rational};
use twistcover_core::poly::{parse, Monomial, QPoly, Stem, VarName};

// Möbius-formula oracle for cyclotomic polynomials, with plain i64 arithmetic.
fn mobius(n: u32) -> i32 {
    let (mut n, mut k, mut mu) = (n, 2, 1);
    while k * k <= n {
        if n % k == 0 {
            n /= k;
            if n % k == 0 {
                return 0;
            }
            mu = -mu;
        }
        k += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

fn mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn div_exact(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut rem = a.to_vec();
    let lead = *b.last().unwrap();
    let mut q = vec![0; a.len() - b.len() + 1];
    for k in (0..q.len()).rev() {
        let c = rem[k + b.len() - 1] / lead;
        q[k] = c;
        for (i, y) in b.iter().enumerate() {
            rem[k + i] -= c * y;
        }
    }
    assert!(rem.iter().all(|&r| r == 0));
    q
}

fn phi_oracle(n: u32) -> Vec<i64> {
    let mut num = vec![1i64];
    let mut den = vec![1i64];
    for d in 1..=n {
        if !n.is_multiple_of(d) {
            continue;
        }
        let mut xd = vec![0i64; d as usize + 1];
        xd[0] = -1;
        xd[d as usize] = 1;
        match mobius(n / d) {
            1 => num = mul(&num, &xd),
            -1 => den = mul(&den, &xd),
            _ => {}
        }
    }
    div_exact(&num, &den)
}

fn to_i64(p: &IntPoly) -> Vec<i64> {
    p.coeffs().iter().map(|c| i64::try_from(c).unwrap()).collect()
}

#[test]
fn cyclotomic_matches_mobius_oracle() {
    for n in 1..=60 {
        assert_eq!(to_i64(&cyclotomic_polynomial(n).unwrap()), phi_oracle(n), "n = {n}");
    }
}

#[test]
fn cyclotomic_product_identity() {
    for n in 1..=30u32 {
        let prod = divisors(n).into_iter().fold(IntPoly::one(), |acc, d| acc.mul(&cyclotomic_polynomial(d).unwrap()));
        assert_eq!(prod, IntPoly::x_pow_minus_one(n as usize), "n = {n}");
    }
}

fn cyclo_element(order: u32) -> impl Strategy<Value = CycloNumber> {
    let field = CycloField::new(order).unwrap();
    let deg = field.degree();
    prop::collection::vec((-5i64..=5, 1i64..=3), deg)
        .prop_map(move |cs| field.from_power_coeffs(cs.into_iter().map(|(n, d)| rational(n, d)).collect()))
}

fn field_triple() -> impl Strategy<Value = (CycloNumber, CycloNumber, CycloNumber)> {
    prop::sample::select(vec![3u32, 4, 5, 8, 12])
        .prop_flat_map(|n| (cyclo_element(n), cyclo_element(n), cyclo_element(n)))
}

proptest! {
    #[test]
    fn cyclotomic_field_axioms((a, b, c) in field_triple()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn embedding_is_a_ring_homomorphism((a, b, _c) in field_triple(), k in 2u32..=3) {
        let n = a.order() * k;
        let ea = a.embed(n).unwrap();
        let eb = b.embed(n).unwrap();
        prop_assert_eq!(a.mul(&b).embed(n).unwrap(), ea.mul(&eb));
        prop_assert_eq!(a.add(&b).embed(n).unwrap(), ea.add(&eb));
        prop_assert_eq!(ea.restrict(a.order()).unwrap(), Some(a.clone()));
    }
}

const POOL: [(&str, Stem, &[u32]); 6] = [
    ("x1", Stem::X, &[1]),
    ("x2", Stem::X, &[2]),
    ("u", Stem::U, &[]),
    ("z", Stem::Z, &[]),
    ("w1", Stem::W, &[1]),
    ("s", Stem::S, &[]),
];

fn pool_var(k: usize) -> VarName {
    VarName::indexed(POOL[k].1, POOL[k].2)
}

fn poly_strategy(max_terms: usize, max_exp: u32) -> impl Strategy<Value = QPoly> {
    let term = (prop::collection::vec((0..POOL.len(), 0..=max_exp), 0..3), -6i64..=6, 1i64..=4);
    prop::collection::vec(term, 0..=max_terms).prop_map(|terms| {
        let mut p = QPoly::rational_zero();
        for (factors, n, d) in terms {
            let m = Monomial::from_factors(factors.into_iter().map(|(k, e)| (pool_var(k), e)));
            p.add_term(m, rational(n, d));
        }
        p
    })
}

proptest! {
    #[test]
    fn polynomial_ring_axioms(a in poly_strategy(4, 3), b in poly_strategy(4, 3), c in poly_strategy(3, 2)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !b.is_zero() {
            prop_assert_eq!((&a * &b).exact_divide(&b).ok(), Some(a.clone()));
        }
    }

    #[test]
    fn parse_of_format_is_identity(a in poly_strategy(6, 5)) {
        prop_assert_eq!(parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn identity_substitution(a in poly_strategy(5, 4)) {
        let sigma = a.variables().into_iter().map(|v| (v.clone(), QPoly::rational_var(v))).collect();
        prop_assert_eq!(a.substitute(&sigma), a);
    }
}

/// Random stratified system over the pool: `w1` and `u` at level 1 over the
/// `x`s and `s`, `z` at level 2 over everything below.
fn random_system(rng: &mut ChaCha8Rng) -> CoverRelationSystem<Rational> {
    let lower = |vars: &[usize], rng: &mut ChaCha8Rng| {
        let mut p = QPoly::rational_zero();
        for _ in 0..rng.random_range(1..=3) {
            let k = vars[rng.random_range(0..vars.len())];
            let m = Monomial::var(pool_var(k)).pow(rng.random_range(0..=3));
            p.add_term(m, rational(rng.random_range(-3..=3), 1));
        }
        if p.is_zero() {
            p = QPoly::int(1);
        }
        p
    };
    let base = [0, 1, 5];
    let w_rhs = lower(&base, rng);
    let u_rhs = lower(&base, rng);
    let z_rhs = lower(&[0, 1, 2, 4, 5], rng);
    let rels = vec![
        CoverRelation::new(pool_var(4), rng.random_range(2..=4), w_rhs),
        CoverRelation::new(pool_var(2), rng.random_range(2..=3), u_rhs),
        CoverRelation::new(pool_var(3), rng.random_range(2..=4), z_rhs),
    ];
    let levels = [(pool_var(4), 1), (pool_var(2), 1), (pool_var(3), 2)].into_iter().collect();
    CoverRelationSystem::new(rels, levels).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn normal_form_is_confluent(p in poly_strategy(4, 6), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = random_system(&mut rng);
        let expected = sys.normal_form(&p);
        prop_assert!(sys.is_reduced(&expected));
        let by_random = sys.normal_form_by(&p, |r| rng.random_range(0..r.len()));
        prop_assert_eq!(&by_random, &expected);
        prop_assert_eq!(sys.normal_form_by(&p, |r| r.len() - 1), expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn rewriting_decreases_the_measure(p in poly_strategy(4, 6), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = random_system(&mut rng);
        let redexes = sys.redexes(&p);
        for redex in &redexes {
            let before = sys.measure(&redex.monomial);
            let after = sys.rewrite_step(&p, redex);
            for (m, _) in after.terms() {
                if p.coefficient(m).is_none() {
                    prop_assert!(sys.measure(m) < before, "{} not below {}", m, redex.monomial);
                }
            }
        }
    }

    #[test]
    fn normal_form_respects_ring_operations(a in poly_strategy(3, 5), b in poly_strategy(3, 5), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = random_system(&mut rng);
        let (na, nb) = (sys.normal_form(&a), sys.normal_form(&b));
        prop_assert_eq!(sys.normal_form(&(&a + &b)), &na + &nb);
        prop_assert_eq!(sys.normal_form(&(&a * &b)), sys.normal_form(&(&na * &nb)));
        prop_assert_eq!(sys.normal_form(&na), na);
    }
}

#[test]
fn coefficient_bigints_do_not_overflow() {
    let p = parse("(x1 + 2)^40").unwrap();
    let c = p.coefficient(&Monomial::one()).unwrap();
    assert_eq!(*c.numer(), BigInt::from(2).pow(40u32));
}
