use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{
    base_var, copy_var, derive_exponent, relation_system, var, AbelianCoverSpec, ConstructError, Construction,
    CoverModel, CoverSpec, Fraction, InvariantGenerator, LayerExponents, PresentedVariety, QuotientPresentation,
    SymbolicPoint, Symmetry, TwistInstance, TwistPresentation,
};
use crate::coverring::CoverRelationSystem;
use crate::exact::Rational;
use crate::galois::{AbelianGroupSpec, KummerAction};
use crate::poly::{QPoly, Stem, VarName};

/// `w[i][j]`
fn radical(i: u32, j: u32) -> VarName {
    VarName::indexed(Stem::W, &[i, j])
}

/// `w[j]` on the single cover.
fn generic_radical(j: u32) -> VarName {
    VarName::indexed(Stem::W, &[j])
}

fn quotient_var(i: u32, j: u32) -> VarName {
    VarName::indexed(Stem::Z, &[i, j])
}

/// Twist coordinate `Z[j]`.
fn twist_var(j: u32) -> VarName {
    VarName::indexed(Stem::BigZ, &[j])
}

/// Instance coordinate `Z[i][j]`.
fn instance_var(i: u32, j: u32) -> VarName {
    VarName::indexed(Stem::BigZ, &[i, j])
}

fn layers(spec: &AbelianCoverSpec) -> impl Iterator<Item = u32> {
    1..=spec.r() as u32
}

fn copy_relations(spec: &AbelianCoverSpec, copies: u32) -> Vec<(VarName, u32, QPoly, u32)> {
    let mut rows = Vec::new();
    for i in 1..=copies {
        for j in layers(spec) {
            rows.push((radical(i, j), spec.n(j), spec.f_at(j, i), 1));
        }
    }
    rows
}

fn generic_relations(spec: &AbelianCoverSpec) -> Vec<(VarName, u32, QPoly, u32)> {
    layers(spec).map(|j| (generic_radical(j), spec.n(j), spec.f(j).clone(), 1)).collect()
}

fn copy_coordinates(spec: &AbelianCoverSpec, i: u32) -> impl Iterator<Item = VarName> + '_ {
    (1..=spec.ell).map(move |e| copy_var(i, e))
}

/// `w[1][j]^a * w[i+1][j]`
fn generator_monomial(i: u32, j: u32, a: u32) -> QPoly {
    &var(radical(1, j)).pow(a) * &var(radical(i + 1, j))
}

/// `m`-fold fiber product of the cover over the base: coordinates `x[i][e]`
/// and `w[i][j]` with `w[i][j]^{n_j} = f_j(x[i])`.
pub fn fiber_product(spec: &AbelianCoverSpec) -> Result<PresentedVariety, ConstructError> {
    spec.validate()?;
    let mut variables = Vec::new();
    for i in 1..=spec.m {
        variables.extend(copy_coordinates(spec, i));
        variables.extend(layers(spec).map(|j| radical(i, j)));
    }
    let rows = copy_relations(spec, spec.m);
    let equations = rows.iter().map(|(h, e, r, _)| &var(h.clone()).pow(*e) - r).collect();
    let model = CoverModel::new(relation_system(rows)?, BTreeMap::new());
    Ok(PresentedVariety {
        name: format!("{}-fold fiber product", spec.m),
        variables,
        parameters: Vec::new(),
        equations,
        model,
    })
}

fn single_cover(spec: &AbelianCoverSpec) -> Result<PresentedVariety, ConstructError> {
    let mut variables: Vec<VarName> = (1..=spec.ell).map(base_var).collect();
    variables.extend(layers(spec).map(generic_radical));
    let rows = generic_relations(spec);
    let equations = rows.iter().map(|(h, e, r, _)| &var(h.clone()).pow(*e) - r).collect();
    Ok(PresentedVariety {
        name: "cover".into(),
        variables,
        parameters: Vec::new(),
        equations,
        model: CoverModel::new(relation_system(rows)?, BTreeMap::new()),
    })
}

fn derive_layer(
    spec: &AbelianCoverSpec,
    action: &KummerAction,
    pair: &CoverRelationSystem<Rational>,
    j: u32,
) -> Result<LayerExponents, ConstructError> {
    let n = spec.n(j);
    let label = j.to_string();
    let generator = derive_exponent(&format!("invariance of z[1][{j}]"), 1..=n - 1, |a| {
        Ok(action.is_invariant(&generator_monomial(1, j, a))?)
    })?;
    let f1 = spec.f_at(j, 1);
    let f2 = spec.f_at(j, 2);
    let lhs = pair.normal_form(&generator_monomial(1, j, generator.value).pow(n));
    let quotient = derive_exponent(&format!("quotient identity of layer {j}"), 0..=2 * n, |c| {
        Ok(pair.is_zero_mod(&(&lhs - &(&f1.pow(c) * &f2))))
    })?;
    let model = CoverModel::new(pair.clone(), BTreeMap::new());
    let ratio: BTreeMap<VarName, Fraction> =
        [(instance_var(1, j), Fraction::ratio(radical(2, j), radical(1, j)))].into_iter().collect();
    let twist = derive_exponent(&format!("twist identity of layer {j}"), 0..=2 * n, |t| {
        let eq = &(&f1.pow(t) * &var(instance_var(1, j)).pow(n)) - &f2;
        Ok(model.reduce_substituted(&eq, &ratio)?.is_zero())
    })?;
    Ok(LayerExponents {
        layer: label,
        n,
        generator,
        quotient,
        twist,
        reference_generator: spec.n(1) - 1,
        reference_quotient: n - spec.d(j),
        reference_twist: spec.d(j),
    })
}

fn derive_all(spec: &AbelianCoverSpec, action: &KummerAction) -> Result<Vec<LayerExponents>, ConstructError> {
    let pair = relation_system(copy_relations(spec, 2))?;
    layers(spec).map(|j| derive_layer(spec, action, &pair, j)).collect()
}

fn diagonal_action(spec: &AbelianCoverSpec) -> Result<(AbelianGroupSpec, KummerAction), ConstructError> {
    let group = AbelianGroupSpec::new(spec.orders())?;
    let action = KummerAction::diagonal(&group);
    Ok((group, action))
}

fn build_generators(
    spec: &AbelianCoverSpec,
    exps: &[LayerExponents],
    action: &KummerAction,
) -> Vec<InvariantGenerator> {
    let mut out = Vec::new();
    for i in 1..spec.m {
        for j in layers(spec) {
            out.push(InvariantGenerator {
                name: quotient_var(i, j),
                definition: generator_monomial(i, j, exps[j as usize - 1].generator.value),
                layer: j.to_string(),
                action: action.clone(),
            });
        }
    }
    out
}

/// Quotient generators `z[i][j] = w[1][j]^{a_j} * w[i+1][j]`, with `a_j`
/// the exponent in `[1, n_j - 1]` that makes the monomial invariant under
/// the diagonal action.
pub fn invariant_generators(spec: &AbelianCoverSpec) -> Result<Vec<InvariantGenerator>, ConstructError> {
    spec.validate()?;
    if spec.m < 2 {
        return Err(ConstructError::NeedsTwoCopies);
    }
    let (_, action) = diagonal_action(spec)?;
    let exps = derive_all(spec, &action)?;
    Ok(build_generators(spec, &exps, &action))
}

/// The same monomials with the single exponent `n_1 - 1` on every layer.
/// They are invariant only on layers with `n_j = n_1`.
pub fn uniform_exponent_generators(spec: &AbelianCoverSpec) -> Result<Vec<InvariantGenerator>, ConstructError> {
    spec.validate()?;
    let (_, action) = diagonal_action(spec)?;
    let a = spec.n(1) - 1;
    let mut out = Vec::new();
    for i in 1..spec.m {
        for j in layers(spec) {
            out.push(InvariantGenerator {
                name: quotient_var(i, j),
                definition: generator_monomial(i, j, a),
                layer: j.to_string(),
                action: action.clone(),
            });
        }
    }
    Ok(out)
}

fn build_quotient(
    spec: &AbelianCoverSpec,
    exps: &[LayerExponents],
    generators: Vec<InvariantGenerator>,
) -> Result<QuotientPresentation, ConstructError> {
    let mut variables = Vec::new();
    for i in 1..=spec.m {
        variables.extend(copy_coordinates(spec, i));
    }
    let mut equations = Vec::new();
    for g in &generators {
        let (i, j) = (g.name.indices()[0], g.name.indices()[1]);
        let e = &exps[j as usize - 1];
        variables.push(g.name.clone());
        equations
            .push(&var(g.name.clone()).pow(e.n) - &(&spec.f_at(j, 1).pow(e.quotient.value) * &spec.f_at(j, i + 1)));
    }
    let definitions = generators.iter().map(|g| (g.name.clone(), g.definition.clone())).collect();
    let model = CoverModel::new(relation_system(copy_relations(spec, spec.m))?, definitions);
    Ok(QuotientPresentation {
        variety: PresentedVariety { name: "quotient".into(), variables, parameters: Vec::new(), equations, model },
        generators,
    })
}

/// The quotient of the fiber product by the diagonal action, in the
/// generators `z[i][j]`: `z[i][j]^{n_j} = f_j(x[1])^{c_j} * f_j(x[i+1])`.
pub fn quotient_presentation(spec: &AbelianCoverSpec) -> Result<QuotientPresentation, ConstructError> {
    let c = abelian_construction(spec)?;
    c.quotient.ok_or(ConstructError::NeedsTwoCopies)
}

fn build_twist(spec: &AbelianCoverSpec, exps: &[LayerExponents]) -> Result<TwistPresentation, ConstructError> {
    let mut variables: Vec<VarName> = (1..=spec.ell).map(base_var).collect();
    variables.extend(layers(spec).map(twist_var));
    let parameters: Vec<VarName> = copy_coordinates(spec, 1).collect();
    let mut equations = Vec::new();
    let mut trivialization = BTreeMap::new();
    for j in layers(spec) {
        let e = &exps[j as usize - 1];
        let scale = spec.f_at(j, 1).pow(e.twist.value);
        equations.push(&(&scale * &var(twist_var(j)).pow(e.n)) - spec.f(j));
        trivialization.insert(twist_var(j), Fraction::ratio(generic_radical(j), radical(1, j)));
    }
    let mut instances = Vec::new();
    for i in 1..spec.m {
        for j in layers(spec) {
            let e = &exps[j as usize - 1];
            let scale = spec.f_at(j, 1).pow(e.twist.value);
            instances.push(TwistInstance {
                copy: i,
                layer: j.to_string(),
                equation: &(&scale * &var(instance_var(i, j)).pow(e.n)) - &spec.f_at(j, i + 1),
                substitution: [(instance_var(i, j), Fraction::ratio(radical(i + 1, j), radical(1, j)))]
                    .into_iter()
                    .collect(),
            });
        }
    }
    let mut rows = copy_relations(spec, spec.m);
    rows.extend(generic_relations(spec));
    let model = CoverModel::new(relation_system(rows)?, BTreeMap::new());
    Ok(TwistPresentation {
        variety: PresentedVariety { name: "twist".into(), variables, parameters, equations, model },
        trivialization,
        instances,
    })
}

/// The twist of the cover by the extension of function fields of the fiber
/// product over its quotient, in coordinates `x[e]`, `Z[j]`:
/// `f_j(x[1])^{t_j} * Z[j]^{n_j} = f_j(x)`.
pub fn twist_presentation(spec: &AbelianCoverSpec) -> Result<TwistPresentation, ConstructError> {
    let c = abelian_construction(spec)?;
    c.twist.ok_or(ConstructError::NeedsTwoCopies)
}

fn build_points(spec: &AbelianCoverSpec) -> Vec<SymbolicPoint> {
    let mut points = Vec::new();
    for i in 1..=spec.m {
        let mut coordinates: Vec<(VarName, Fraction)> =
            (1..=spec.ell).map(|e| (base_var(e), Fraction::var(copy_var(i, e)))).collect();
        for j in layers(spec) {
            let value = if i == 1 { Fraction::one() } else { Fraction::ratio(radical(i, j), radical(1, j)) };
            coordinates.push((twist_var(j), value));
        }
        points.push(SymbolicPoint { label: format!("P_{i}"), coordinates });
    }
    points
}

/// The `m` points `P_1 = (x[1], 1, ..., 1)` and
/// `P_{i+1} = (x[i+1], w[i+1][j] / w[1][j])` on the twist.
pub fn rational_points(spec: &AbelianCoverSpec) -> Result<Vec<SymbolicPoint>, ConstructError> {
    spec.validate()?;
    Ok(build_points(spec))
}

pub fn abelian_construction(spec: &AbelianCoverSpec) -> Result<Construction, ConstructError> {
    spec.validate()?;
    let (group, action) = diagonal_action(spec)?;
    let exponents = derive_all(spec, &action)?;
    let cover = single_cover(spec)?;
    let product = fiber_product(spec)?;
    let (quotient, twist) = if spec.m >= 2 {
        let gens = build_generators(spec, &exponents, &action);
        (Some(build_quotient(spec, &exponents, gens)?), Some(build_twist(spec, &exponents)?))
    } else {
        (None, None)
    };
    let mut notes: Vec<String> = Vec::new();
    for j in spec.constant_layers() {
        notes.push(format!("layer {j}: f_{j} is constant, so this layer is degenerate; identities hold formally"));
    }
    for e in &exponents {
        if !e.generator.unique || !e.quotient.unique || !e.twist.unique {
            notes.push(format!(
                "layer {}: some exponent is not uniquely determined; the smallest admissible value is used",
                e.layer
            ));
        }
    }
    if spec.m == 1 {
        notes.push("m = 1: the quotient is the base itself and there are no twist equations".into());
    }
    Ok(Construction {
        spec: CoverSpec::Abelian(spec.clone()),
        cover,
        product,
        quotient,
        twist,
        points: build_points(spec),
        exponents,
        symmetry: Symmetry::Abelian { group, action },
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse;

    fn spec(layers: &[(u32, &str)], m: u32) -> AbelianCoverSpec {
        AbelianCoverSpec::parse(1, layers, m).unwrap()
    }

    fn text(p: &QPoly) -> String {
        p.to_string()
    }

    #[test]
    fn fiber_product_equations() {
        let fp = fiber_product(&spec(&[(2, "x^3 + 1")], 2)).unwrap();
        let eqs: Vec<String> = fp.equations.iter().map(text).collect();
        assert_eq!(eqs, ["-x[1][1]^3 + w[1][1]^2 - 1", "-x[2][1]^3 + w[2][1]^2 - 1"]);
        assert!(fp.stray_variables().is_empty());
        let one = fiber_product(&spec(&[(2, "x^3 + 1")], 1)).unwrap();
        assert_eq!(one.equations.len(), 1);
        let two = fiber_product(&spec(&[(2, "x^3 + 1"), (4, "x^2 + 2")], 2)).unwrap();
        assert_eq!(two.equations.len(), 4);
        let heads: Vec<(String, u32)> =
            two.model.relations.relations().iter().map(|r| (r.head.to_text(), r.exponent)).collect();
        assert!(heads.contains(&("w[2][2]".into(), 4)));
        assert!(heads.contains(&("w[1][1]".into(), 2)));
    }

    #[test]
    fn generator_exponents() {
        let g = invariant_generators(&spec(&[(2, "x^3 + 1")], 2)).unwrap();
        assert_eq!(text(&g[0].definition), "w[1][1]*w[2][1]");
        let g = invariant_generators(&spec(&[(3, "x^3 + 1")], 2)).unwrap();
        assert_eq!(text(&g[0].definition), "w[1][1]^2*w[2][1]");
        let g = invariant_generators(&spec(&[(2, "x^3 + 1"), (4, "x^2 + 2")], 2)).unwrap();
        assert_eq!(text(&g[1].definition), "w[1][2]^3*w[2][2]");
        for gen in &g {
            assert!(gen.action.is_invariant(&gen.definition).unwrap());
        }
        assert_eq!(invariant_generators(&spec(&[(2, "x")], 1)).unwrap_err(), ConstructError::NeedsTwoCopies);
    }

    #[test]
    fn uniform_exponent_fails_on_mixed_orders() {
        let gens = uniform_exponent_generators(&spec(&[(2, "x^3 + 1"), (4, "x^2 + 2")], 2)).unwrap();
        assert!(gens[0].action.is_invariant(&gens[0].definition).unwrap());
        assert!(!gens[1].action.is_invariant(&gens[1].definition).unwrap());
    }

    #[test]
    fn quotient_equations() {
        let q = quotient_presentation(&spec(&[(2, "x^3 + 1")], 2)).unwrap();
        assert_eq!(q.variety.equations[0], parse("z[1][1]^2 - (x[1][1]^3 + 1)*(x[2][1]^3 + 1)").unwrap());
        let q = quotient_presentation(&spec(&[(3, "x^3 + 1")], 2)).unwrap();
        assert_eq!(q.variety.equations[0], parse("z[1][1]^3 - (x[1][1]^3 + 1)^2*(x[2][1]^3 + 1)").unwrap());
        for eq in &q.variety.equations {
            assert!(q.variety.model.is_zero(eq));
        }
    }

    #[test]
    fn twist_equations() {
        let t = twist_presentation(&spec(&[(2, "x^3 + 1")], 3)).unwrap();
        assert_eq!(t.variety.equations, [parse("(x[1][1]^3 + 1)*Z[1]^2 - x[1]^3 - 1").unwrap()]);
        assert_eq!(t.instances.len(), 2);
        assert_eq!(t.instances[1].equation, parse("(x[1][1]^3 + 1)*Z[2][1]^2 - x[3][1]^3 - 1").unwrap());
        assert!(t.variety.stray_variables().is_empty());
        let t = twist_presentation(&spec(&[(3, "x^3 + 1")], 2)).unwrap();
        assert_eq!(t.variety.equations, [parse("(x[1][1]^3 + 1)*Z[1]^3 - x[1]^3 - 1").unwrap()]);
    }

    #[test]
    fn exponent_table_cyclic_and_mixed() {
        let c = abelian_construction(&spec(&[(3, "x^3 + 1")], 2)).unwrap();
        let e = &c.exponents[0];
        assert_eq!((e.generator.value, e.quotient.value, e.twist.value), (2, 2, 1));
        assert!(e.agrees() && e.quotient.unique && e.twist.unique);
        let c = abelian_construction(&spec(&[(2, "x^3 + 1"), (4, "x^2 + 2")], 2)).unwrap();
        let e = &c.exponents[1];
        assert_eq!((e.generator.value, e.quotient.value, e.twist.value), (3, 3, 1));
        assert_eq!((e.reference_generator, e.reference_quotient, e.reference_twist), (1, 2, 2));
        assert_eq!(c.discrepancies().len(), 3);
    }

    #[test]
    fn points() {
        let pts = rational_points(&spec(&[(2, "x^3 + 1")], 2)).unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[0].to_string(), "P_1 = (x[1] = x[1][1], Z[1] = 1)");
        assert_eq!(pts[1].to_string(), "P_2 = (x[1] = x[2][1], Z[1] = w[2][1]/w[1][1])");
        assert_eq!(rational_points(&spec(&[(2, "x^3 + 1")], 1)).unwrap().len(), 1);
    }

    #[test]
    fn degenerate_layer_flagged() {
        let c = abelian_construction(&spec(&[(2, "1")], 2)).unwrap();
        assert!(c.notes.iter().any(|n| n.contains("constant")));
    }
}
