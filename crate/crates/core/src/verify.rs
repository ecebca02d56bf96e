//! Runs every symbolically checkable identity of a construction and
//! collects the outcomes, with witnesses for failures.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::construct::{
    construct, substitute_fractions, Construction, CoverModel, CoverSpec, InvariantGenerator, LayerExponents,
    ModelError, PresentedVariety, QuotientPresentation, SymbolicPoint, Symmetry, TwistPresentation,
};
use crate::galois::{action_is_homomorphic, cocycle_check, dihedral_relations_hold, inclusion_cocycle, GaloisError};
use crate::poly::{CycloPoly, QPoly, Stem, VarName};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl CheckStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Skipped => "skipped",
        }
    }
}

/// Evidence attached to a failed check.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    /// A nonzero normal form.
    Residue(QPoly),
    /// `g(p) - p` for a moved generator, over a cyclotomic field.
    Moved(CycloPoly),
    /// Failures that are not about a polynomial, such as a malformed spec.
    Diagnostic(String),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Residue(p) => write!(f, "{p}"),
            Witness::Moved(p) => write!(f, "{p}"),
            Witness::Diagnostic(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub witness: Option<Witness>,
    pub notes: Vec<String>,
}

impl CheckResult {
    pub fn pass(name: &str) -> Self {
        CheckResult { name: name.into(), status: CheckStatus::Pass, witness: None, notes: Vec::new() }
    }

    pub fn fail(name: &str, witness: Witness) -> Self {
        CheckResult { name: name.into(), status: CheckStatus::Fail, witness: Some(witness), notes: Vec::new() }
    }

    pub fn skipped(name: &str, reason: &str) -> Self {
        CheckResult {
            name: name.into(),
            status: CheckStatus::Skipped,
            witness: None,
            notes: alloc::vec![reason.into()],
        }
    }

    pub fn with_note(mut self, note: String) -> Self {
        self.notes.push(note);
        self
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

/// Substitutes the point, clears denominators and reduces every equation
/// of `variety` in `model`.
pub fn check_point_membership(
    pt: &SymbolicPoint,
    variety: &PresentedVariety,
    model: &CoverModel,
) -> Result<CheckResult, ModelError> {
    let name = format!("membership {}", pt.label);
    let assign = pt.assignment();
    for eq in &variety.equations {
        let residue = model.reduce_fraction(&substitute_fractions(eq, &assign))?;
        if !residue.is_zero() {
            return Ok(CheckResult::fail(&name, Witness::Residue(residue))
                .with_note(format!("equation {eq} does not vanish at {pt}")));
        }
    }
    Ok(CheckResult::pass(&name))
}

/// Every generator is fixed by every group generator of its action.
pub fn check_invariance(gens: &[InvariantGenerator]) -> Result<CheckResult, GaloisError> {
    for g in gens {
        if let Some((k, moved)) = g.action.invariance_defect(&g.definition)? {
            return Ok(CheckResult::fail("invariance", Witness::Moved(moved)).with_note(format!(
                "generator {} of the action moves {} = {}",
                k + 1,
                g.name,
                g.definition
            )));
        }
    }
    Ok(CheckResult::pass("invariance").with_note(format!("{} generators fixed", gens.len())))
}

/// Every quotient equation becomes zero after substituting the defining
/// monomials and reducing.
pub fn check_quotient_identity(q: &QuotientPresentation) -> CheckResult {
    for eq in &q.variety.equations {
        let residue = q.variety.model.reduce(eq);
        if !residue.is_zero() {
            return CheckResult::fail("quotient identity", Witness::Residue(residue))
                .with_note(format!("{eq} is not an identity"));
        }
    }
    CheckResult::pass("quotient identity")
}

/// Every instance of the twist equations, pulled back by its trivializing
/// substitution, is an ideal member.
pub fn check_twist_identity(twist: &TwistPresentation) -> Result<CheckResult, ModelError> {
    for inst in &twist.instances {
        let residue = twist.variety.model.reduce_substituted(&inst.equation, &inst.substitution)?;
        if !residue.is_zero() {
            return Ok(CheckResult::fail("twist identity", Witness::Residue(residue))
                .with_note(format!("instance {} of layer {}: {}", inst.copy, inst.layer, inst.equation)));
        }
    }
    Ok(CheckResult::pass("twist identity").with_note(format!("{} instances", twist.instances.len())))
}

/// Pulls the twist equations back along the trivialization; over the big
/// field the twist must become the cover.
pub fn check_trivialization(twist: Option<&TwistPresentation>) -> Result<CheckResult, ModelError> {
    let Some(twist) = twist else {
        return Ok(CheckResult::skipped("trivialization", "no twist equations"));
    };
    for eq in &twist.variety.equations {
        let residue = twist.variety.model.reduce_substituted(eq, &twist.trivialization)?;
        if !residue.is_zero() {
            return Ok(CheckResult::fail("trivialization", Witness::Residue(residue))
                .with_note(format!("{eq} does not pull back to the cover")));
        }
    }
    let map: Vec<String> = twist.trivialization.iter().map(|(v, f)| format!("{v} -> {f}")).collect();
    Ok(CheckResult::pass("trivialization").with_note(map.join(", ")))
}

/// The cocycle `a_g = g` and the group structure it lives on.
pub fn check_cocycle(symmetry: &Symmetry) -> Result<CheckResult, GaloisError> {
    let table = symmetry.table();
    if !cocycle_check(&table, &table, &inclusion_cocycle(&table))? {
        return Ok(CheckResult::fail("cocycle", Witness::Diagnostic("a_{gh} != a_g a_h".into())));
    }
    match symmetry {
        Symmetry::Abelian { group, action } => {
            let probe: QPoly = (1..=group.factors().len() as u32)
                .map(|j| QPoly::rational_var(VarName::indexed(Stem::W, &[1, j])))
                .fold(QPoly::rational_var(VarName::indexed(Stem::X, &[1, 1])), |acc, w| &acc + &(&acc * &w));
            if !action_is_homomorphic(group, action, &probe)? {
                return Ok(CheckResult::fail(
                    "cocycle",
                    Witness::Diagnostic("the Kummer action is not a homomorphism".into()),
                ));
            }
        }
        Symmetry::Dihedral { layers, table } => {
            if !dihedral_relations_hold(table, layers.n as usize) {
                return Ok(CheckResult::fail(
                    "cocycle",
                    Witness::Diagnostic("sigma^n = tau^2 = 1, tau sigma tau = sigma^-1 fails".into()),
                ));
            }
            if !layers.layer_orders_hold()? {
                return Ok(CheckResult::fail(
                    "cocycle",
                    Witness::Diagnostic("sigma or tau acts with the wrong order".into()),
                ));
            }
        }
    }
    Ok(CheckResult::pass("cocycle").with_note(format!("a_g = g over a group of order {}", table.order())))
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub spec: String,
    pub exponents: Vec<LayerExponents>,
    pub checks: Vec<CheckResult>,
    pub discrepancies: Vec<String>,
    pub notes: Vec<String>,
    pub points: usize,
}

impl VerificationReport {
    pub fn overall(&self) -> CheckStatus {
        if self.checks.iter().any(|c| c.status == CheckStatus::Fail) {
            CheckStatus::Fail
        } else {
            CheckStatus::Pass
        }
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "spec: {}", self.spec)?;
        write_exponent_table(f, &self.exponents)?;
        writeln!(f, "checks:")?;
        for c in &self.checks {
            writeln!(f, "  [{}] {}", c.status.as_str(), c.name)?;
            if let Some(w) = &c.witness {
                writeln!(f, "      witness: {w}")?;
            }
            for n in &c.notes {
                writeln!(f, "      {n}")?;
            }
        }
        if !self.discrepancies.is_empty() {
            writeln!(f, "discrepancies:")?;
            for d in &self.discrepancies {
                writeln!(f, "  {d}")?;
            }
        }
        if !self.notes.is_empty() {
            writeln!(f, "notes:")?;
            for n in &self.notes {
                writeln!(f, "  {n}")?;
            }
        }
        writeln!(f, "points verified: {}", self.points)?;
        writeln!(f, "overall: {}", self.overall().as_str())
    }
}

/// The derived exponents with their reference values in parentheses.
pub fn write_exponent_table(f: &mut dyn fmt::Write, exps: &[LayerExponents]) -> fmt::Result {
    writeln!(f, "exponents (derived / reference):")?;
    writeln!(f, "  layer  n  a      c      t      agrees")?;
    for e in exps {
        let cell = |d: u32, r: u32| format!("{d} / {r}");
        writeln!(
            f,
            "  {:<5}  {:<2} {:<6} {:<6} {:<6} {}",
            e.layer,
            e.n,
            cell(e.generator.value, e.reference_generator),
            cell(e.quotient.value, e.reference_quotient),
            cell(e.twist.value, e.reference_twist),
            if e.agrees() { "yes" } else { "no" }
        )?;
    }
    Ok(())
}

const ORDER: [&str; 7] =
    ["fiber product", "invariance", "quotient identity", "twist identity", "membership", "trivialization", "cocycle"];

fn skip_rest(checks: &mut Vec<CheckResult>, from: usize, m: u32, reason: &str) {
    for name in &ORDER[from..] {
        if *name == "membership" {
            for i in 1..=m {
                checks.push(CheckResult::skipped(&format!("membership P_{i}"), reason));
            }
        } else {
            checks.push(CheckResult::skipped(name, reason));
        }
    }
}

fn error_check<E: fmt::Display>(name: &str, e: E) -> CheckResult {
    CheckResult::fail(name, Witness::Diagnostic(e.to_string()))
}

/// Runs, in order: well-formedness, fiber product, invariance, quotient
/// identity, twist identity, membership of every point, trivialization
/// and the cocycle check. A failing check never stops the later ones,
/// except that nothing can run without a well-formed spec and a
/// construction.
pub fn full_verification(spec: &CoverSpec) -> VerificationReport {
    let mut checks = Vec::new();
    let mut report = VerificationReport {
        spec: spec.to_string(),
        exponents: Vec::new(),
        checks: Vec::new(),
        discrepancies: Vec::new(),
        notes: Vec::new(),
        points: 0,
    };
    if let Err(e) = spec.validate() {
        checks.push(error_check("well-formedness", e));
        skip_rest(&mut checks, 0, spec.m(), "spec is malformed");
        report.checks = checks;
        return report;
    }
    checks.push(CheckResult::pass("well-formedness"));
    let c = match construct(spec) {
        Ok(c) => c,
        Err(e) => {
            checks.push(error_check("fiber product", e));
            skip_rest(&mut checks, 1, spec.m(), "construction failed");
            report.checks = checks;
            return report;
        }
    };
    checks.extend(construction_checks(&c));
    report.points = checks.iter().filter(|ch| ch.name.starts_with("membership") && ch.passed()).count();
    report.exponents = c.exponents.clone();
    report.discrepancies = c.discrepancies();
    report.notes = c.notes.clone();
    report.notes.push(match spec {
        CoverSpec::Abelian(_) => "the Kummer action scales w[i][j] by zeta_{n_j} on every copy at once".into(),
        CoverSpec::Dihedral(_) => "sigma scales z by zeta_n and fixes x, s, u; tau negates u".into(),
    });
    report.notes.push("independence of the points in the Mordell-Weil group is not checked".into());
    report.checks = checks;
    report
}

/// The checks after well-formedness, for an existing construction.
pub fn construction_checks(c: &Construction) -> Vec<CheckResult> {
    let mut checks = Vec::new();
    checks.push(check_fiber_product(&c.product));

    match &c.quotient {
        Some(q) => {
            let mut inv = check_invariance(&q.generators).unwrap_or_else(|e| error_check("invariance", e));
            if let CoverSpec::Abelian(spec) = &c.spec {
                for note in uniform_exponent_notes(spec) {
                    inv = inv.with_note(note);
                }
            }
            checks.push(inv);
            checks.push(check_quotient_identity(q));
        }
        None => {
            checks.push(CheckResult::skipped("invariance", "m = 1: no quotient generators"));
            checks.push(CheckResult::skipped("quotient identity", "m = 1: no quotient equations"));
        }
    }

    match &c.twist {
        Some(t) => {
            checks.push(check_twist_identity(t).unwrap_or_else(|e| error_check("twist identity", e)));
            for pt in &c.points {
                let name = format!("membership {}", pt.label);
                checks.push(
                    check_point_membership(pt, &t.variety, &t.variety.model).unwrap_or_else(|e| error_check(&name, e)),
                );
            }
        }
        None => {
            checks.push(CheckResult::skipped("twist identity", "m = 1: no twist equations"));
            for pt in &c.points {
                checks.push(CheckResult::skipped(&format!("membership {}", pt.label), "m = 1: no twist equations"));
            }
        }
    }
    checks.push(check_trivialization(c.twist.as_ref()).unwrap_or_else(|e| error_check("trivialization", e)));
    checks.push(check_cocycle(&c.symmetry).unwrap_or_else(|e| error_check("cocycle", e)));
    checks
}

fn check_fiber_product(product: &PresentedVariety) -> CheckResult {
    let stray = product.stray_variables();
    if let Some(v) = stray.iter().next() {
        return CheckResult::fail("fiber product", Witness::Diagnostic(format!("equation uses unknown variable {v}")));
    }
    for eq in &product.equations {
        let residue = product.model.reduce(eq);
        if !residue.is_zero() {
            return CheckResult::fail("fiber product", Witness::Residue(residue));
        }
    }
    CheckResult::pass("fiber product").with_note(format!("{} equations", product.equations.len()))
}

/// Layers on which the single exponent `n_1 - 1` fails to give invariant
/// generators.
fn uniform_exponent_notes(spec: &crate::construct::AbelianCoverSpec) -> Vec<String> {
    let Ok(gens) = crate::construct::uniform_exponent_generators(spec) else {
        return Vec::new();
    };
    let mut seen = BTreeMap::new();
    for g in gens.iter().filter(|g| g.name.indices()[0] == 1) {
        if let Ok(Some((_, moved))) = g.action.invariance_defect(&g.definition) {
            seen.entry(g.layer.clone()).or_insert_with(|| {
                format!(
                    "layer {}: the uniform exponent n_1 - 1 gives {} = {}, which is not invariant (g(z) - z = {})",
                    g.layer, g.name, g.definition, moved
                )
            });
        }
    }
    seen.into_values().collect()
}
