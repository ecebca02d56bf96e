//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//! Run with `cargo test -p twistcover --test acceptance`.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;
use twistcover::{cmd_rank, cmd_verify, Format, EXIT_PASS};
use twistcover_core::construct::{construct, AbelianCoverSpec, CoverSpec, DihedralCoverSpec};
use twistcover_core::coverring::{CoverRelation, CoverRelationSystem};
use twistcover_core::exact::{cyclotomic_polynomial, divisors, IntPoly, Rational};
use twistcover_core::ffcheck::{
    check_twist_point_ff, enumerate_solutions, point_values, reduce_poly, tally, FFSample, DEFAULT_BUDGET,
};
use twistcover_core::poly::{parse, QPoly, VarName};
use twistcover_core::verify::{full_verification, CheckStatus};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn v(text: &str) -> VarName {
    parse(text).unwrap().variables().into_iter().next().unwrap()
}

fn abelian_matrix() -> Vec<(&'static str, AbelianCoverSpec)> {
    let one = |n, m| AbelianCoverSpec::parse(1, &[(n, "x^3 + 1")], m).unwrap();
    vec![
        ("(2;1;1;2)", one(2, 2)),
        ("(2;1;1;3)", one(2, 3)),
        ("(2;1;1;4)", one(2, 4)),
        ("(3;1;1;2)", one(3, 2)),
        ("(3;1;1;3)", one(3, 3)),
        ("(2,4;2;1;2)", AbelianCoverSpec::parse(1, &[(2, "x^3 + 1"), (4, "x^3 + 8")], 2).unwrap()),
        ("(2;1;2;2)", AbelianCoverSpec::parse(2, &[(2, "x1^3 + x2^2 + 1")], 2).unwrap()),
    ]
}

fn dihedral_matrix() -> Vec<(String, DihedralCoverSpec)> {
    let mut out = Vec::new();
    for n in [2, 3] {
        for m in [2, 3] {
            out.push((format!("D_{n}, m = {m}"), DihedralCoverSpec::parse(n, "x^3 + 1", "x^2 + x + 1", m).unwrap()));
        }
    }
    out
}

fn all_specs() -> Vec<(String, CoverSpec)> {
    let mut specs: Vec<(String, CoverSpec)> =
        abelian_matrix().into_iter().map(|(l, s)| (l.to_string(), CoverSpec::Abelian(s))).collect();
    specs.extend(dihedral_matrix().into_iter().map(|(l, s)| (l, CoverSpec::Dihedral(s))));
    specs
}

fn construction_matrix() -> Outcome {
    let mut slowest = Duration::ZERO;
    let specs = all_specs();
    for (label, spec) in &specs {
        let start = Instant::now();
        let r = full_verification(spec);
        let took = start.elapsed();
        slowest = slowest.max(took);
        ensure(r.overall() == CheckStatus::Pass, || format!("{label}: overall fail\n{r}"))?;
        let mut required = vec![
            "invariance".to_string(),
            "quotient identity".into(),
            "twist identity".into(),
            "trivialization".into(),
        ];
        required.extend((1..=spec.m()).map(|i| format!("membership P_{i}")));
        for name in &required {
            let status = r.check(name).map(|c| c.status);
            ensure(status == Some(CheckStatus::Pass), || format!("{label}: {name} is {status:?}"))?;
        }
        ensure(took < Duration::from_secs(10), || format!("{label}: took {took:?}"))?;
    }
    Ok(format!("{} specs, slowest {:.2?}", specs.len(), slowest))
}

fn exponent_agreement() -> Outcome {
    let mut cyclic = 0;
    for (label, spec) in abelian_matrix() {
        let c = construct(&CoverSpec::Abelian(spec.clone())).map_err(|e| e.to_string())?;
        if spec.r() != 1 {
            continue;
        }
        cyclic += 1;
        let e = &c.exponents[0];
        ensure(e.quotient.value == e.n - 1 && e.twist.value == 1, || {
            format!("{label}: c = {}, t = {}", e.quotient.value, e.twist.value)
        })?;
        ensure(e.quotient.value == e.reference_quotient && e.twist.value == e.reference_twist, || {
            format!("{label}: differs from reference")
        })?;
    }
    let mixed = AbelianCoverSpec::parse(1, &[(2, "x^3 + 1"), (4, "x^3 + 8")], 2).unwrap();
    let report = full_verification(&CoverSpec::Abelian(mixed.clone())).to_string();
    ensure(report.contains("derived quotient exponent c = 3 differs from reference value 2"), || {
        format!("no annotation in\n{report}")
    })?;

    // The quotient generator z[1][2] = w[1][2]^3 * w[2][2] satisfies
    // z^4 = f_2(x_1)^c f_2(x_2) exactly for c = 3.
    let c = construct(&CoverSpec::Abelian(mixed)).map_err(|e| e.to_string())?;
    let q = c.quotient.ok_or("no quotient")?;
    let identity = |c: u32| parse(&format!("z[1][2]^4 - (x[1][1]^3 + 8)^{c} * (x[2][1]^3 + 8)")).unwrap();
    ensure(q.variety.model.is_zero(&identity(3)), || "c = 3 identity does not reduce to zero".into())?;
    ensure(!q.variety.model.is_zero(&identity(2)), || "c = 2 identity reduces to zero".into())?;
    Ok(format!("{cyclic} cyclic specs exact; (2,4) annotated, c = 3 confirmed and c = 2 refuted by rewriting"))
}

fn dihedral_relations() -> Outcome {
    let mut checked = 0;
    for (label, spec) in dihedral_matrix() {
        let c = construct(&CoverSpec::Dihedral(spec.clone())).map_err(|e| e.to_string())?;
        let q = c.quotient.as_ref().ok_or("no quotient")?;
        let n = spec.n;
        for i in 1..spec.m {
            let f = |k: u32| format!("(x[{k}]^3 + 1)");
            let g = |k: u32| format!("(s[{k}]^2 + s[{k}] + 1)");
            let u_rel = parse(&format!("U[{i}]^2 - {} * {}", f(1), f(i + 1))).unwrap();
            let z_rel = parse(&format!("Z[{i}]^{n} - {}^{} * {}", g(1), n - 1, g(i + 1))).unwrap();
            ensure(q.variety.model.is_zero(&u_rel), || format!("{label}: {u_rel} is not zero"))?;
            ensure(q.variety.model.is_zero(&z_rel), || format!("{label}: {z_rel} is not zero"))?;
            checked += 2;
        }
        let t = c.twist.as_ref().ok_or("no twist")?;
        let expected = vec![
            parse("(x[1]^3 + 1)*U^2 - (x^3 + 1)").unwrap(),
            parse(&format!("(s[1]^2 + s[1] + 1)*Z^{n} - (s^2 + s + 1)")).unwrap(),
        ];
        ensure(t.variety.equations == expected, || {
            format!("{label}: twist system {:?}", t.variety.equations.iter().map(|e| e.to_string()).collect::<Vec<_>>())
        })?;
    }
    Ok(format!("{checked} relations reduce to zero; twist systems literal"))
}

fn rank_of(dir: &Path, body: &str, m: u32, rk_end: u32) -> Result<u64, String> {
    let path = dir.join(format!("rank_{m}_{rk_end}.toml"));
    std::fs::write(&path, format!("{body}[descriptor]\nrk_end = {rk_end}\nassert_no_extra_factor = true\n")).unwrap();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cmd_rank(&path, Some(m), Format::Text, &mut out, &mut err);
    let out = String::from_utf8(out).unwrap();
    ensure(code == EXIT_PASS, || format!("exit {code}: {}", String::from_utf8_lossy(&err)))?;
    let line = out.lines().find(|l| l.starts_with("rank: ")).ok_or("no rank line")?;
    line["rank: ".len()..].trim().parse().map_err(|e| format!("{line}: {e}"))
}

fn rank_formula() -> Outcome {
    let dir = TempDir::new().map_err(|e| e.to_string())?;
    let bodies = [
        ("abelian", "kind = \"abelian\"\nm = 1\n[[layers]]\nn = 2\nf = \"x^3 + 1\"\n"),
        ("dihedral", "kind = \"dihedral\"\nn = 3\nf = \"x^3 + 1\"\ng = \"x^2 + x + 1\"\nm = 1\n"),
    ];
    let mut cells = 0;
    for (label, body) in bodies {
        for m in 1..=5 {
            for rk in [1, 2] {
                let got = rank_of(dir.path(), body, m, rk)?;
                ensure(got == (m * rk) as u64, || format!("{label} m = {m}, rk_end = {rk}: got {got}"))?;
                cells += 1;
            }
        }
    }
    Ok(format!("{cells} cells equal m * rk_end"))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut runs = 0;
    for (label, spec) in all_specs() {
        if full_verification(&spec).overall() != CheckStatus::Pass {
            continue;
        }
        let c = construct(&spec).map_err(|e| e.to_string())?;
        for p in [7u64, 11, 13] {
            let t = tally(&c, p, 100, &mut rng).map_err(|e| format!("{label} at {p}: {e}"))?;
            ensure(t.samples >= 100, || format!("{label} at {p}: only {} valid samples", t.samples))?;
            ensure(t.all_passed(), || format!("{label} at {p}: {} of {} passed", t.passed, t.samples))?;
            runs += 1;
        }
    }

    // w^2 = x^3 + 1 over F_7: the sample x_1 = 2, w_1 = 3, x_2 = 0, w_2 = 1
    let c = construct(&CoverSpec::Abelian(AbelianCoverSpec::parse(1, &[(2, "x^3 + 1")], 2).unwrap()))
        .map_err(|e| e.to_string())?;
    let product_vars: Vec<VarName> = ["x[1][1]", "w[1][1]", "x[2][1]", "w[2][1]"].into_iter().map(v).collect();
    let product_eqs = c
        .product
        .equations
        .iter()
        .map(|e| reduce_poly(e, 7))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let points = enumerate_solutions(&product_eqs, 7, &product_vars, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    ensure(points.solutions.contains(&vec![2, 3, 0, 1]), || "worked sample is not on the product".into())?;
    let mut on_twist = 0;
    for sol in &points.solutions {
        if sol[1] == 0 {
            continue;
        }
        let sample = FFSample::new(7, product_vars.iter().cloned().zip(sol.iter().copied()).collect());
        ensure(check_twist_point_ff(&sample, &c) == Ok(true), || format!("sample {sol:?} fails"))?;
        on_twist += 1;
    }
    let worked = FFSample::new(7, product_vars.iter().cloned().zip([2, 3, 0, 1]).collect());
    let z = point_values(&worked, &c).map_err(|e| e.to_string())?[1][&v("Z[1]")].value();
    ensure(z == 5, || format!("Z = {z}"))?;
    let twist = &c.twist.as_ref().ok_or("no twist")?.variety;
    let at_two: BTreeMap<VarName, QPoly> = [(v("x[1][1]"), parse("2").unwrap())].into_iter().collect();
    let eqs = twist
        .equations
        .iter()
        .map(|e| reduce_poly(&e.substitute(&at_two), 7))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let fiber = enumerate_solutions(&eqs, 7, &[v("x[1]"), v("Z[1]")], DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    ensure(fiber.solutions.contains(&vec![0, 5]), || format!("(0, 5) not among {:?}", fiber.solutions))?;
    ensure((2 * z * z) % 7 == 1, || format!("2 * {z}^2 != 1 mod 7"))?;
    Ok(format!(
        "{runs} spec/prime runs at 100 samples all pass; p = 7: {} product points enumerated, {on_twist} mapped onto the twist, Z = 5",
        points.count
    ))
}

fn random_poly(rng: &mut ChaCha8Rng, vars: &[&str], terms: usize, max_exp: u32) -> QPoly {
    let mut text = String::from("0");
    for _ in 0..rng.random_range(0..=terms) {
        let (n, d) = (rng.random_range(-6i64..=6), rng.random_range(1i64..=4));
        text.push_str(&format!(" + ({n}/{d})"));
        for _ in 0..rng.random_range(0..3) {
            text.push_str(&format!("*{}^{}", vars[rng.random_range(0..vars.len())], rng.random_range(0..=max_exp)));
        }
    }
    parse(&text).unwrap()
}

fn random_system(rng: &mut ChaCha8Rng) -> CoverRelationSystem<Rational> {
    let mut rhs = |vars: &[&str]| {
        let p = random_poly(rng, vars, 3, 3);
        if p.is_zero() {
            parse("1").unwrap()
        } else {
            p
        }
    };
    let (w, u, z) = (rhs(&["x1", "x2", "s"]), rhs(&["x1", "x2", "s"]), rhs(&["x1", "x2", "s", "u", "w1"]));
    let rels = vec![
        CoverRelation::new(v("w1"), rng.random_range(2..=4), w),
        CoverRelation::new(v("u"), rng.random_range(2..=3), u),
        CoverRelation::new(v("z"), rng.random_range(2..=4), z),
    ];
    let levels = [(v("w1"), 1), (v("u"), 1), (v("z"), 2)].into_iter().collect();
    CoverRelationSystem::new(rels, levels).unwrap()
}

fn kernel_suites() -> Outcome {
    let start = Instant::now();
    for n in 1..=30u32 {
        let prod = divisors(n).into_iter().fold(IntPoly::one(), |acc, d| acc.mul(&cyclotomic_polynomial(d).unwrap()));
        ensure(prod == IntPoly::x_pow_minus_one(n as usize), || format!("product identity fails at n = {n}"))?;
    }
    let pool = ["x1", "x2", "u", "z", "w1", "s"];
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for k in 0..1000 {
        let sys = random_system(&mut rng);
        let p = random_poly(&mut rng, &pool, 4, 6);
        let nf = sys.normal_form(&p);
        let mut chooser = ChaCha8Rng::seed_from_u64(k);
        ensure(sys.is_reduced(&nf), || format!("{nf} is not reduced"))?;
        ensure(sys.normal_form_by(&p, |r| chooser.random_range(0..r.len())) == nf, || {
            format!("normal form of {p} depends on the rewrite order")
        })?;
        ensure(sys.normal_form_by(&p, |r| r.len() - 1) == nf, || {
            format!("normal form of {p} depends on the rewrite order")
        })?;
    }
    for _ in 0..1000 {
        let p = random_poly(&mut rng, &pool, 6, 5);
        ensure(parse(&p.to_string()).as_ref() == Ok(&p), || format!("parse(format({p})) differs"))?;
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(60), || format!("took {took:?}"))?;
    Ok(format!("product identity n <= 30, 1000 confluence cases, 1000 round trips in {took:.2?}"))
}

fn verify_via_cli() -> Outcome {
    let dir = TempDir::new().map_err(|e| e.to_string())?;
    let path = dir.path().join("cyclic.toml");
    std::fs::write(&path, "kind = \"abelian\"\nm = 3\n[[layers]]\nn = 2\nf = \"x^3 + 1\"\n").unwrap();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cmd_verify(&path, None, Format::Text, &mut out, &mut err);
    ensure(code == EXIT_PASS, || String::from_utf8_lossy(&out).into_owned())?;
    Ok("cmd_verify exits 0".into())
}

fn main() {
    let criteria: [Criterion; 6] = [
        ("1 construction matrix", || verify_via_cli().and_then(|_| construction_matrix())),
        ("2 exponent agreement", exponent_agreement),
        ("3 dihedral relations", dihedral_relations),
        ("4 rank formula", rank_formula),
        ("5 oracle equivalence", oracle_equivalence),
        ("6 kernel suites", kernel_suites),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
