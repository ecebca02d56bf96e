//! Serializable mirrors of the engine's results, and their text rendering.

use std::fmt::Write as _;

use serde::Serialize;
use twistcover_core::construct::{Construction, LayerExponents, PresentedVariety, SymbolicPoint};
use twistcover_core::ffcheck::{describe, PrimeTally};
use twistcover_core::rank::{MWPrediction, RankKind, RankPrediction};
use twistcover_core::verify::{write_exponent_table, VerificationReport};

#[derive(Clone, Debug, Serialize)]
pub struct ExponentJson {
    pub derived: u32,
    pub unique: bool,
    pub reference: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct LayerJson {
    pub layer: String,
    pub n: u32,
    pub a: ExponentJson,
    pub c: ExponentJson,
    pub t: ExponentJson,
    pub agrees: bool,
}

impl From<&LayerExponents> for LayerJson {
    fn from(e: &LayerExponents) -> Self {
        let cell = |d: &twistcover_core::construct::DerivedExponent, r: u32| ExponentJson {
            derived: d.value,
            unique: d.unique,
            reference: r,
        };
        LayerJson {
            layer: e.layer.clone(),
            n: e.n,
            a: cell(&e.generator, e.reference_generator),
            c: cell(&e.quotient, e.reference_quotient),
            t: cell(&e.twist, e.reference_twist),
            agrees: e.agrees(),
        }
    }
}

fn exponents_json(exps: &[LayerExponents]) -> Vec<LayerJson> {
    exps.iter().map(LayerJson::from).collect()
}

fn exponent_table(exps: &[LayerExponents]) -> String {
    let mut s = String::new();
    write_exponent_table(&mut s, exps).expect("writing to a String");
    s
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckJson {
    pub name: String,
    pub status: &'static str,
    pub witness: Option<String>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyJson {
    pub spec: String,
    pub exponents: Vec<LayerJson>,
    pub checks: Vec<CheckJson>,
    pub discrepancies: Vec<String>,
    pub notes: Vec<String>,
    pub points: usize,
    pub overall: &'static str,
}

impl From<&VerificationReport> for VerifyJson {
    fn from(r: &VerificationReport) -> Self {
        VerifyJson {
            spec: r.spec.clone(),
            exponents: exponents_json(&r.exponents),
            checks: r
                .checks
                .iter()
                .map(|c| CheckJson {
                    name: c.name.clone(),
                    status: c.status.as_str(),
                    witness: c.witness.as_ref().map(|w| w.to_string()),
                    notes: c.notes.clone(),
                })
                .collect(),
            discrepancies: r.discrepancies.clone(),
            notes: r.notes.clone(),
            points: r.points,
            overall: r.overall().as_str(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VarietyJson {
    pub name: String,
    pub coordinates: Vec<String>,
    pub parameters: Vec<String>,
    pub equations: Vec<String>,
}

impl From<&PresentedVariety> for VarietyJson {
    fn from(v: &PresentedVariety) -> Self {
        VarietyJson {
            name: v.name.clone(),
            coordinates: v.variables.iter().map(|x| x.to_text()).collect(),
            parameters: v.parameters.iter().map(|x| x.to_text()).collect(),
            equations: v.equations.iter().map(|e| e.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AssignmentJson {
    pub variable: String,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointJson {
    pub label: String,
    pub coordinates: Vec<AssignmentJson>,
}

impl From<&SymbolicPoint> for PointJson {
    fn from(p: &SymbolicPoint) -> Self {
        PointJson {
            label: p.label.clone(),
            coordinates: p
                .coordinates
                .iter()
                .map(|(v, f)| AssignmentJson { variable: v.to_text(), value: f.to_string() })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorJson {
    pub name: String,
    pub layer: String,
    pub definition: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuotientJson {
    pub variety: VarietyJson,
    pub generators: Vec<GeneratorJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistJson {
    pub variety: VarietyJson,
    pub trivialization: Vec<AssignmentJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BuildJson {
    pub spec: String,
    pub exponents: Vec<LayerJson>,
    pub cover: VarietyJson,
    pub product: VarietyJson,
    pub quotient: Option<QuotientJson>,
    pub twist: Option<TwistJson>,
    pub points: Vec<PointJson>,
    pub discrepancies: Vec<String>,
    pub notes: Vec<String>,
}

impl From<&Construction> for BuildJson {
    fn from(c: &Construction) -> Self {
        BuildJson {
            spec: c.spec.to_string(),
            exponents: exponents_json(&c.exponents),
            cover: (&c.cover).into(),
            product: (&c.product).into(),
            quotient: c.quotient.as_ref().map(|q| QuotientJson {
                variety: (&q.variety).into(),
                generators: q
                    .generators
                    .iter()
                    .map(|g| GeneratorJson {
                        name: g.name.to_text(),
                        layer: g.layer.clone(),
                        definition: g.definition.to_string(),
                    })
                    .collect(),
            }),
            twist: c.twist.as_ref().map(|t| TwistJson {
                variety: (&t.variety).into(),
                trivialization: t
                    .trivialization
                    .iter()
                    .map(|(v, f)| AssignmentJson { variable: v.to_text(), value: f.to_string() })
                    .collect(),
            }),
            points: c.points.iter().map(PointJson::from).collect(),
            discrepancies: c.discrepancies(),
            notes: c.notes.clone(),
        }
    }
}

pub fn build_text(c: &Construction) -> String {
    let mut s = String::new();
    writeln!(s, "spec: {}", c.spec).unwrap();
    s.push_str(&exponent_table(&c.exponents));
    write!(s, "{}{}", c.cover, c.product).unwrap();
    match &c.quotient {
        Some(q) => {
            write!(s, "{}", q.variety).unwrap();
            writeln!(s, "  generators:").unwrap();
            for g in &q.generators {
                writeln!(s, "    {} = {}", g.name, g.definition).unwrap();
            }
        }
        None => writeln!(s, "quotient: the base itself (m = 1)").unwrap(),
    }
    match &c.twist {
        Some(t) => {
            write!(s, "{}", t.variety).unwrap();
            writeln!(s, "  trivialization:").unwrap();
            for (v, f) in &t.trivialization {
                writeln!(s, "    {v} = {f}").unwrap();
            }
        }
        None => writeln!(s, "twist: (empty)\n  note: with m = 1 there are no twist equations").unwrap(),
    }
    writeln!(s, "points:").unwrap();
    for p in &c.points {
        writeln!(s, "  {p}").unwrap();
    }
    push_list(&mut s, "discrepancies", &c.discrepancies());
    push_list(&mut s, "notes", &c.notes);
    s
}

fn push_list(s: &mut String, title: &str, items: &[String]) {
    if items.is_empty() {
        return;
    }
    writeln!(s, "{title}:").unwrap();
    for i in items {
        writeln!(s, "  {i}").unwrap();
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RankJson {
    pub spec: String,
    pub exponents: Vec<LayerJson>,
    pub label: String,
    pub copies: u32,
    pub rk_end: u32,
    pub rank: u64,
    pub kind: &'static str,
    pub group: Option<String>,
    pub notes: Vec<String>,
}

fn kind_str(k: RankKind) -> &'static str {
    match k {
        RankKind::Exact => "exact",
        RankKind::LowerBound => "lower bound",
    }
}

/// Either an abelian group prediction or a dihedral rank.
pub enum RankOutcome {
    Group(MWPrediction),
    Jacobian { label: String, copies: u32, rk_end: u32, prediction: RankPrediction },
}

pub fn rank_json(spec: &str, exps: &[LayerExponents], r: &RankOutcome) -> RankJson {
    let base = |label: &str, copies, rk_end, rank, kind, group, notes: &[String]| RankJson {
        spec: spec.into(),
        exponents: exponents_json(exps),
        label: label.into(),
        copies,
        rk_end,
        rank,
        kind: kind_str(kind),
        group,
        notes: notes.to_vec(),
    };
    match r {
        RankOutcome::Group(p) => base(&p.label, p.copies, p.rk_end, p.rank, p.kind, Some(p.shape()), &p.notes),
        RankOutcome::Jacobian { label, copies, rk_end, prediction } => {
            base(label, *copies, *rk_end, prediction.rank, prediction.kind, None, &prediction.notes)
        }
    }
}

pub fn rank_text(spec: &str, exps: &[LayerExponents], r: &RankOutcome) -> String {
    let mut s = String::new();
    writeln!(s, "spec: {spec}").unwrap();
    s.push_str(&exponent_table(exps));
    match r {
        RankOutcome::Group(p) => write!(s, "{p}").unwrap(),
        RankOutcome::Jacobian { label, copies, rk_end, prediction } => {
            let tag = if prediction.kind == RankKind::LowerBound { " (lower bound)" } else { "" };
            writeln!(s, "rank: {}{tag}", prediction.rank).unwrap();
            writeln!(s, "formula: m * rk End({label}) = {copies} * {rk_end}").unwrap();
            for n in &prediction.notes {
                writeln!(s, "note: {n}").unwrap();
            }
        }
    }
    s
}

#[derive(Clone, Debug, Serialize)]
pub struct TallyJson {
    pub prime: u64,
    pub samples: u32,
    pub passed: u32,
    pub rejected: u32,
    pub exhausted: bool,
    pub ratio: Option<f64>,
}

impl From<&PrimeTally> for TallyJson {
    fn from(t: &PrimeTally) -> Self {
        TallyJson {
            prime: t.prime,
            samples: t.samples,
            passed: t.passed,
            rejected: t.rejected,
            exhausted: t.exhausted,
            ratio: (t.samples > 0).then(|| t.passed as f64 / t.samples as f64),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FfJson {
    pub spec: String,
    pub exponents: Vec<LayerJson>,
    pub seed: u64,
    pub primes: Vec<TallyJson>,
    pub warnings: Vec<String>,
    pub overall: &'static str,
}

pub fn ff_json(
    spec: &str,
    exps: &[LayerExponents],
    seed: u64,
    tallies: &[PrimeTally],
    warnings: &[String],
    pass: bool,
) -> FfJson {
    FfJson {
        spec: spec.into(),
        exponents: exponents_json(exps),
        seed,
        primes: tallies.iter().map(TallyJson::from).collect(),
        warnings: warnings.to_vec(),
        overall: if pass { "pass" } else { "fail" },
    }
}

pub fn ff_text(spec: &str, exps: &[LayerExponents], tallies: &[PrimeTally], warnings: &[String], pass: bool) -> String {
    let mut s = String::new();
    writeln!(s, "spec: {spec}").unwrap();
    s.push_str(&exponent_table(exps));
    for t in tallies {
        writeln!(s, "{}{}", describe(t), if t.exhausted { " (sampler exhausted)" } else { "" }).unwrap();
    }
    push_list(&mut s, "warnings", warnings);
    writeln!(s, "overall: {}", if pass { "pass" } else { "fail" }).unwrap();
    s
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}
