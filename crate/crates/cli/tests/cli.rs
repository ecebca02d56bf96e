use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;
use twistcover::{cmd_build, cmd_ffcheck, cmd_rank, cmd_verify, Format, EXIT_INPUT, EXIT_PASS};

const CYCLIC: &str = "kind = \"abelian\"\nm = 3\n[[layers]]\nn = 2\nf = \"x^3 + 1\"\n";
const MIXED: &str =
    "kind = \"abelian\"\nm = 2\n[[layers]]\nn = 2\nf = \"x^3 + 1\"\n[[layers]]\nn = 4\nf = \"x^3 + 2\"\n";
const DIHEDRAL: &str = "kind = \"dihedral\"\nn = 3\nf = \"x^3 + 1\"\ng = \"x^2 + x + 1\"\nm = 2\n";

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

struct Run {
    code: u8,
    out: String,
    err: String,
}

fn run(f: impl FnOnce(&mut Vec<u8>, &mut Vec<u8>) -> u8) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = f(&mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn verify(p: &Path, format: Format) -> Run {
    run(|o, e| cmd_verify(p, None, format, o, e))
}

#[test]
fn build_writes_text_and_structured_files() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "cyclic.toml", CYCLIC);
    let out = dir.path().join("out");
    let r = run(|o, e| cmd_build(&spec, None, Some(&out), Format::Text, o, e));
    assert_eq!(r.code, EXIT_PASS, "{}", r.err);
    let text = std::fs::read_to_string(out.join("construction.txt")).unwrap();
    for section in ["cover", "3-fold fiber product", "quotient", "twist", "P_3 = ", "exponents (derived / reference)"] {
        assert!(text.contains(section), "missing {section}");
    }
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("construction.json")).unwrap()).unwrap();
    assert_eq!(json["points"].as_array().unwrap().len(), 3);
    assert_eq!(json["cover"]["equations"][0], "-x[1]^3 + w[1]^2 - 1");
    assert_eq!(json["exponents"][0]["c"]["derived"], 1);
}

#[test]
fn build_rejects_bad_chain() {
    let dir = TempDir::new().unwrap();
    let spec = write(
        &dir,
        "chain.toml",
        "kind = \"abelian\"\nm = 2\n[[layers]]\nn = 3\nf = \"x\"\n[[layers]]\nn = 4\nf = \"x + 1\"\n",
    );
    let r = run(|o, e| cmd_build(&spec, None, None, Format::Text, o, e));
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.err.contains("[3, 4]") && r.err.contains("divisibility chain"), "{}", r.err);
    assert!(r.out.is_empty());
}

#[test]
fn build_with_one_copy_has_empty_twist() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "cyclic.toml", CYCLIC);
    let r = run(|o, e| cmd_build(&spec, Some(1), None, Format::Text, o, e));
    assert_eq!(r.code, EXIT_PASS);
    assert!(r.out.contains("twist: (empty)"));
    assert!(r.out.contains("no twist equations"));
    let r = run(|o, e| cmd_build(&spec, Some(1), None, Format::Structured, o, e));
    let json: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert!(json["twist"].is_null());
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let r = verify(&write(&dir, "c.toml", CYCLIC), Format::Text);
    assert_eq!(r.code, EXIT_PASS);
    assert!(r.out.contains("overall: pass"));

    let r = verify(&write(&dir, "m.toml", MIXED), Format::Text);
    assert_eq!(r.code, EXIT_PASS);
    assert!(r.out.contains("discrepancies:"));
    assert!(r.out.contains("derived quotient exponent c = 3 differs from reference value 2"));

    let r = verify(
        &write(&dir, "bad.toml", "kind = \"abelian\"\nm = 2\n[[layers]]\nn = 2\nf = \"x^^3 +\"\n"),
        Format::Text,
    );
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.err.contains("syntax error"));

    let r = verify(&dir.path().join("missing.toml"), Format::Text);
    assert_eq!(r.code, EXIT_INPUT);
}

#[test]
fn verify_structured_report() {
    let dir = TempDir::new().unwrap();
    let r = verify(&write(&dir, "d.toml", DIHEDRAL), Format::Structured);
    assert_eq!(r.code, EXIT_PASS);
    let json: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(json["overall"], "pass");
    assert_eq!(json["points"], 2);
    assert_eq!(json["exponents"].as_array().unwrap().len(), 2);
    assert!(json["exponents"][0]["a"]["reference"].is_u64());
}

#[test]
fn rank_reports() {
    let dir = TempDir::new().unwrap();
    let with = |extra: &str| format!("{CYCLIC}[descriptor]\n{extra}");
    let p = write(&dir, "r.toml", &with("rk_end = 2\nassert_no_extra_factor = true\n"));
    let r = run(|o, e| cmd_rank(&p, Some(5), Format::Text, o, e));
    assert_eq!(r.code, EXIT_PASS);
    assert!(r.out.contains("rank: 10\n"), "{}", r.out);
    assert!(r.out.contains("exponents (derived / reference)"));

    let p = write(&dir, "lb.toml", &with("rk_end = 1\nassert_no_extra_factor = false\n"));
    let r = run(|o, e| cmd_rank(&p, None, Format::Text, o, e));
    assert!(r.out.contains("rank: 3 (lower bound)"));

    let p = write(&dir, "none.toml", CYCLIC);
    let r = run(|o, e| cmd_rank(&p, None, Format::Text, o, e));
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.err.contains("descriptor"));

    let p = write(&dir, "zero.toml", &with("rk_end = 0\n"));
    assert_eq!(run(|o, e| cmd_rank(&p, None, Format::Text, o, e)).code, EXIT_INPUT);

    let p = write(&dir, "dih.toml", &format!("{DIHEDRAL}[descriptor]\nrk_end = 2\nassert_no_extra_factor = true\n"));
    let r = run(|o, e| cmd_rank(&p, Some(3), Format::Structured, o, e));
    let json: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!((json["rank"].as_u64(), json["kind"].as_str()), (Some(6), Some("exact")));
}

#[test]
fn ffcheck_cases() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "c.toml", CYCLIC);
    let r = run(|o, e| cmd_ffcheck(&p, None, &[7, 11, 13], 100, 1, Format::Text, o, e));
    assert_eq!(r.code, EXIT_PASS, "{}", r.err);
    assert_eq!(r.out.matches("100 samples, 100 passed (100.0%)").count(), 3, "{}", r.out);

    let r = run(|o, e| cmd_ffcheck(&p, None, &[2], 10, 1, Format::Text, o, e));
    assert_eq!(r.code, EXIT_INPUT);
    let r = run(|o, e| cmd_ffcheck(&p, None, &[9], 10, 1, Format::Text, o, e));
    assert_eq!(r.code, EXIT_INPUT);

    let r = run(|o, e| cmd_ffcheck(&p, None, &[7], 0, 1, Format::Text, o, e));
    assert_eq!(r.code, EXIT_PASS);
    assert!(r.err.contains("no samples"));
}

#[test]
fn ffcheck_is_seed_deterministic() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "d.toml", DIHEDRAL);
    let go = |seed, primes: &[u64]| run(|o, e| cmd_ffcheck(&p, None, primes, 30, seed, Format::Structured, o, e)).out;
    assert_eq!(go(5, &[7, 11]), go(5, &[7, 11]));
    let a: serde_json::Value = serde_json::from_str(&go(5, &[7, 11])).unwrap();
    let b: serde_json::Value = serde_json::from_str(&go(5, &[11, 7])).unwrap();
    assert_eq!(a["primes"][0], b["primes"][1]);
}

#[test]
fn binary_exit_codes_and_byte_identical_output() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "c.toml", CYCLIC);
    let bin = env!("CARGO_BIN_EXE_twistcover");
    let go = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let spec = p.to_str().unwrap();
    let a = go(&["ffcheck", "--spec", spec, "--primes", "7,11", "--trials", "20", "--seed", "9"]);
    let b = go(&["ffcheck", "--spec", spec, "--primes", "7,11", "--trials", "20", "--seed", "9"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(go(&["verify", "--spec", spec, "--format", "structured"]).status.code(), Some(0));
    assert_eq!(go(&["ffcheck", "--spec", spec, "--primes", "2"]).status.code(), Some(2));
    assert_eq!(go(&["verify"]).status.code(), Some(2));
    assert_eq!(go(&["verify", "--spec", spec, "--format", "xml"]).status.code(), Some(2));
}
