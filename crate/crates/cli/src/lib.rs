//! Command-line front-end for `twistcover-core`: reads cover specification
//! files and runs the construction, verification, rank and finite-field
//! pipelines.
//!
//! Every command returns an exit code: [`EXIT_PASS`], [`EXIT_FAIL`] when a
//! mathematical check fails, [`EXIT_INPUT`] for unusable input. Reports go
//! to `out`, diagnostics to `err`.

pub mod report;
pub mod specfile;

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use twistcover_core::construct::{construct, ConstructError, CoverSpec};
use twistcover_core::ffcheck::{check_prime, tally, FfError};
use twistcover_core::rank::{dihedral_jacobian_rank, predict_mw_group};
use twistcover_core::verify::{full_verification, CheckStatus};

use report::RankOutcome;
use specfile::SpecFile;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Structured,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "structured" | "json" => Ok(Format::Structured),
            _ => Err(format!("unknown format {s:?}, expected text or structured")),
        }
    }
}

pub const DEFAULT_PRIMES: [u64; 3] = [7, 11, 13];
pub const DEFAULT_TRIALS: u32 = 100;

fn input_error(err: &mut dyn Write, e: &anyhow::Error) -> u8 {
    let _ = writeln!(err, "error: {e:#}");
    EXIT_INPUT
}

fn load(path: &Path, m: Option<u32>) -> Result<(SpecFile, CoverSpec)> {
    let file = SpecFile::load(path)?;
    let mut spec = file.cover_spec().with_context(|| format!("invalid spec in {}", path.display()))?;
    if let Some(m) = m {
        spec = spec.with_m(m);
        spec.validate()?;
    }
    Ok((file, spec))
}

/// Construction failures on a valid spec are mathematical, not input errors.
fn construct_or_report(spec: &CoverSpec, err: &mut dyn Write) -> Result<twistcover_core::construct::Construction, u8> {
    construct(spec).map_err(|e| {
        let _ = writeln!(err, "error: construction failed: {e}");
        match e {
            ConstructError::Spec(_) => EXIT_INPUT,
            _ => EXIT_FAIL,
        }
    })
}

/// Builds every presentation and the point list. With `out_dir`, writes
/// `construction.txt` and `construction.json` there; otherwise prints the
/// report in `format`.
pub fn cmd_build(
    spec_path: &Path,
    m: Option<u32>,
    out_dir: Option<&Path>,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> u8 {
    let (_, spec) = match load(spec_path, m) {
        Ok(s) => s,
        Err(e) => return input_error(err, &e),
    };
    let c = match construct_or_report(&spec, err) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let text = report::build_text(&c);
    let json = report::to_json(&report::BuildJson::from(&c));
    match out_dir {
        Some(dir) => {
            let written = std::fs::create_dir_all(dir)
                .and_then(|_| std::fs::write(dir.join("construction.txt"), &text))
                .and_then(|_| std::fs::write(dir.join("construction.json"), &json));
            if let Err(e) = written {
                let _ = writeln!(err, "error: cannot write to {}: {e}", dir.display());
                return EXIT_INPUT;
            }
            let _ = writeln!(
                out,
                "wrote {} and {}",
                dir.join("construction.txt").display(),
                dir.join("construction.json").display()
            );
        }
        None => {
            let _ = out.write_all(match format {
                Format::Text => text.as_bytes(),
                Format::Structured => json.as_bytes(),
            });
        }
    }
    EXIT_PASS
}

pub fn cmd_verify(spec_path: &Path, m: Option<u32>, format: Format, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let (_, spec) = match load(spec_path, m) {
        Ok(s) => s,
        Err(e) => return input_error(err, &e),
    };
    let r = full_verification(&spec);
    let _ = match format {
        Format::Text => write!(out, "{r}"),
        Format::Structured => out.write_all(report::to_json(&report::VerifyJson::from(&r)).as_bytes()),
    };
    if r.overall() == CheckStatus::Pass {
        EXIT_PASS
    } else {
        let _ = writeln!(err, "verification failed");
        EXIT_FAIL
    }
}

pub fn cmd_rank(spec_path: &Path, m: Option<u32>, format: Format, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let (file, spec) = match load(spec_path, m) {
        Ok(s) => s,
        Err(e) => return input_error(err, &e),
    };
    let descriptor = match file.descriptor() {
        Ok(Some(d)) => d,
        Ok(None) => {
            let _ =
                writeln!(err, "error: {} has no [descriptor] block; rank predictions need rk_end", spec_path.display());
            return EXIT_INPUT;
        }
        Err(e) => return input_error(err, &e),
    };
    let c = match construct_or_report(&spec, err) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let outcome = match &spec {
        CoverSpec::Abelian(_) => RankOutcome::Group(predict_mw_group(&descriptor, spec.m(), spec.degree())),
        CoverSpec::Dihedral(_) => RankOutcome::Jacobian {
            label: descriptor.label.clone(),
            copies: spec.m(),
            rk_end: descriptor.rk_end,
            prediction: dihedral_jacobian_rank(&descriptor, spec.m()),
        },
    };
    let label = spec.to_string();
    let _ = match format {
        Format::Text => out.write_all(report::rank_text(&label, &c.exponents, &outcome).as_bytes()),
        Format::Structured => {
            out.write_all(report::to_json(&report::rank_json(&label, &c.exponents, &outcome)).as_bytes())
        }
    };
    EXIT_PASS
}

/// Samples each prime with its own generator seeded from `seed` and the
/// prime, so results do not depend on the order of `primes`.
#[allow(clippy::too_many_arguments)]
pub fn cmd_ffcheck(
    spec_path: &Path,
    m: Option<u32>,
    primes: &[u64],
    trials: u32,
    seed: u64,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> u8 {
    let (_, spec) = match load(spec_path, m) {
        Ok(s) => s,
        Err(e) => return input_error(err, &e),
    };
    let c = match construct_or_report(&spec, err) {
        Ok(c) => c,
        Err(code) => return code,
    };
    for &p in primes {
        if let Err(e) = check_prime(&c, p) {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    }
    let mut warnings = Vec::new();
    if trials == 0 || primes.is_empty() {
        warnings.push("no samples requested".to_string());
    }
    let mut tallies = Vec::new();
    for &p in primes {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        match tally(&c, p, trials, &mut rng) {
            Ok(t) => {
                if trials > 0 && t.samples == 0 {
                    warnings.push(format!("p = {p}: no valid samples"));
                } else if t.samples < trials {
                    warnings.push(format!("p = {p}: only {} of {trials} samples were valid", t.samples));
                }
                tallies.push(t);
            }
            Err(e @ (FfError::NotPrime(_) | FfError::BadPrime { .. } | FfError::BadReduction(_))) => {
                let _ = writeln!(err, "error: {e}");
                return EXIT_INPUT;
            }
            Err(e) => {
                let _ = writeln!(err, "error: p = {p}: {e}");
                return EXIT_FAIL;
            }
        }
    }
    for w in &warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    let pass = tallies.iter().all(|t| t.all_passed());
    let label = spec.to_string();
    let _ = match format {
        Format::Text => out.write_all(report::ff_text(&label, &c.exponents, &tallies, &warnings, pass).as_bytes()),
        Format::Structured => out.write_all(
            report::to_json(&report::ff_json(&label, &c.exponents, seed, &tallies, &warnings, pass)).as_bytes(),
        ),
    };
    if pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}
