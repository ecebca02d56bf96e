use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use super::{
    dcopy, derive_exponent, dvar, relation_system, var, ConstructError, Construction, CoverModel, CoverSpec,
    DihedralCoverSpec, Fraction, InvariantGenerator, LayerExponents, PresentedVariety, QuotientPresentation,
    SymbolicPoint, Symmetry, TwistInstance, TwistPresentation,
};
use crate::galois::{dihedral_layer_actions, GroupTable, KummerAction};
use crate::poly::{QPoly, Stem, VarName};

type Rows = Vec<(VarName, u32, QPoly, u32)>;

fn copy_relations(spec: &DihedralCoverSpec, copies: u32) -> Rows {
    let mut rows = Vec::new();
    for i in 1..=copies {
        rows.push((dcopy(Stem::U, i), 2, spec.f_at(i), 1));
        rows.push((dcopy(Stem::Z, i), spec.n, spec.g_at(i), 2));
    }
    rows
}

fn generic_relations(spec: &DihedralCoverSpec) -> Rows {
    vec![(dvar(Stem::U), 2, spec.f.clone(), 1), (dvar(Stem::Z), spec.n, spec.g.clone(), 2)]
}

/// `s[i] -> x[i]` for every copy, and `s -> x`.
fn identifications(copies: u32) -> BTreeMap<VarName, QPoly> {
    let mut defs: BTreeMap<VarName, QPoly> =
        (1..=copies).map(|i| (dcopy(Stem::S, i), var(dcopy(Stem::X, i)))).collect();
    defs.insert(dvar(Stem::S), var(dvar(Stem::X)));
    defs
}

fn equations(rows: &Rows) -> Vec<QPoly> {
    rows.iter().map(|(h, e, r, _)| &var(h.clone()).pow(*e) - r).collect()
}

/// `head[1]^a * head[i+1]`
fn generator_monomial(stem: Stem, i: u32, a: u32) -> QPoly {
    &var(dcopy(stem, 1)).pow(a) * &var(dcopy(stem, i + 1))
}

struct Layer<'a> {
    label: &'static str,
    radical: Stem,
    quotient: Stem,
    order: u32,
    action: &'a KummerAction,
    /// The polynomial `h` with `radical^order = h` on the single cover, in
    /// the twist coordinates.
    generic: QPoly,
    at: fn(&DihedralCoverSpec, u32) -> QPoly,
    reference: (u32, u32, u32),
}

fn f_at(spec: &DihedralCoverSpec, i: u32) -> QPoly {
    spec.f_at(i)
}

fn g_at_s(spec: &DihedralCoverSpec, i: u32) -> QPoly {
    spec.g_at_s(i)
}

fn derive_layer(
    spec: &DihedralCoverSpec,
    layer: &Layer<'_>,
    model: &CoverModel,
) -> Result<LayerExponents, ConstructError> {
    let n = layer.order;
    let generator = derive_exponent(&format!("invariance of {}[1]", layer.quotient.letter()), 1..=n - 1, |a| {
        Ok(layer.action.is_invariant(&generator_monomial(layer.radical, 1, a))?)
    })?;
    let h1 = (layer.at)(spec, 1);
    let h2 = (layer.at)(spec, 2);
    let lhs = model.reduce(&generator_monomial(layer.radical, 1, generator.value).pow(n));
    let quotient = derive_exponent(&format!("quotient identity of layer {}", layer.label), 0..=2 * n, |c| {
        Ok(model.is_zero(&(&lhs - &(&h1.pow(c) * &h2))))
    })?;
    let coord = dvar(layer.quotient);
    let ratio: BTreeMap<VarName, Fraction> =
        [(coord.clone(), Fraction::ratio(dcopy(layer.radical, 2), dcopy(layer.radical, 1)))].into_iter().collect();
    let twist = derive_exponent(&format!("twist identity of layer {}", layer.label), 0..=2 * n, |t| {
        let eq = &(&h1.pow(t) * &var(coord.clone()).pow(n)) - &h2;
        Ok(model.reduce_substituted(&eq, &ratio)?.is_zero())
    })?;
    let (ra, rc, rt) = layer.reference;
    Ok(LayerExponents {
        layer: layer.label.into(),
        n,
        generator,
        quotient,
        twist,
        reference_generator: ra,
        reference_quotient: rc,
        reference_twist: rt,
    })
}

/// The dihedral construction, layer by layer: the quadratic layer `u`
/// under `tau` gives `U[i]`, the cyclic layer `z` under `sigma` gives
/// `Z[i]`. Each `s[i]` is identified with `x[i]`.
pub fn dihedral_pipeline(spec: &DihedralCoverSpec) -> Result<Construction, ConstructError> {
    spec.validate()?;
    let n = spec.n;
    let layers_action = dihedral_layer_actions(n);
    let g_generic = spec.g_generic_s();
    let layers = [
        Layer {
            label: "U",
            radical: Stem::U,
            quotient: Stem::BigU,
            order: 2,
            action: &layers_action.tau,
            generic: spec.f.clone(),
            at: f_at,
            reference: (1, 1, 1),
        },
        Layer {
            label: "Z",
            radical: Stem::Z,
            quotient: Stem::BigZ,
            order: n,
            action: &layers_action.sigma,
            generic: g_generic.clone(),
            at: g_at_s,
            reference: (n - 1, n - 1, 1),
        },
    ];

    let pair = CoverModel::new(relation_system(copy_relations(spec, 2))?, identifications(2));
    let exponents: Vec<LayerExponents> =
        layers.iter().map(|l| derive_layer(spec, l, &pair)).collect::<Result<_, _>>()?;

    let generic_rows = generic_relations(spec);
    let cover = PresentedVariety {
        name: "cover".into(),
        variables: vec![dvar(Stem::X), dvar(Stem::U), dvar(Stem::Z)],
        parameters: Vec::new(),
        equations: equations(&generic_rows),
        model: CoverModel::new(relation_system(generic_rows.clone())?, BTreeMap::new()),
    };

    let m = spec.m;
    let copy_rows = copy_relations(spec, m);
    let mut product_vars = Vec::new();
    for i in 1..=m {
        product_vars.extend([dcopy(Stem::X, i), dcopy(Stem::U, i), dcopy(Stem::Z, i)]);
    }
    let product = PresentedVariety {
        name: format!("{m}-fold fiber product"),
        variables: product_vars,
        parameters: Vec::new(),
        equations: equations(&copy_rows),
        model: CoverModel::new(relation_system(copy_rows.clone())?, BTreeMap::new()),
    };

    let (quotient, twist) = if m >= 2 {
        let mut generators = Vec::new();
        for i in 1..m {
            for (layer, e) in layers.iter().zip(&exponents) {
                generators.push(InvariantGenerator {
                    name: dcopy(layer.quotient, i),
                    definition: generator_monomial(layer.radical, i, e.generator.value),
                    layer: layer.label.into(),
                    action: layer.action.clone(),
                });
            }
        }
        let mut variables = Vec::new();
        for i in 1..=m {
            variables.extend([dcopy(Stem::X, i), dcopy(Stem::S, i)]);
        }
        let mut q_equations = Vec::new();
        for g in &generators {
            let i = g.name.indices()[0];
            let (layer, e) = layers.iter().zip(&exponents).find(|(l, _)| l.label == g.layer).expect("known layer");
            variables.push(g.name.clone());
            let rhs = &(layer.at)(spec, 1).pow(e.quotient.value) * &(layer.at)(spec, i + 1);
            q_equations.push(&var(g.name.clone()).pow(e.n) - &rhs);
        }
        let mut definitions = identifications(m);
        definitions.extend(generators.iter().map(|g| (g.name.clone(), g.definition.clone())));
        let quotient = QuotientPresentation {
            variety: PresentedVariety {
                name: "quotient".into(),
                variables,
                parameters: Vec::new(),
                equations: q_equations,
                model: CoverModel::new(relation_system(copy_rows.clone())?, definitions.clone()),
            },
            generators,
        };

        let uses_u = spec.g_uses_u();
        let mut t_vars = vec![dvar(Stem::X), dvar(Stem::S)];
        let mut params = vec![dcopy(Stem::X, 1), dcopy(Stem::S, 1)];
        if uses_u {
            t_vars.push(dvar(Stem::U));
            params.push(dcopy(Stem::U, 1));
        }
        t_vars.extend([dvar(Stem::BigU), dvar(Stem::BigZ)]);
        let mut t_equations = Vec::new();
        let mut trivialization = BTreeMap::new();
        let mut instances = Vec::new();
        for (layer, e) in layers.iter().zip(&exponents) {
            let coord = dvar(layer.quotient);
            let scale = (layer.at)(spec, 1).pow(e.twist.value);
            t_equations.push(&(&scale * &var(coord.clone()).pow(e.n)) - &layer.generic);
            trivialization.insert(coord.clone(), Fraction::ratio(dvar(layer.radical), dcopy(layer.radical, 1)));
            for i in 1..m {
                let mut substitution: BTreeMap<VarName, Fraction> =
                    [(coord.clone(), Fraction::ratio(dcopy(layer.radical, i + 1), dcopy(layer.radical, 1)))]
                        .into_iter()
                        .collect();
                if uses_u {
                    substitution.insert(dvar(Stem::U), Fraction::var(dcopy(Stem::U, i + 1)));
                }
                instances.push(TwistInstance {
                    copy: i,
                    layer: layer.label.into(),
                    equation: &(&scale * &var(coord.clone()).pow(e.n)) - &(layer.at)(spec, i + 1),
                    substitution,
                });
            }
        }
        let mut rows = copy_rows.clone();
        rows.extend(generic_rows);
        let mut t_defs = definitions;
        t_defs.extend(identifications(m));
        let twist = TwistPresentation {
            variety: PresentedVariety {
                name: "twist".into(),
                variables: t_vars,
                parameters: params,
                equations: t_equations,
                model: CoverModel::new(relation_system(rows)?, t_defs),
            },
            trivialization,
            instances,
        };
        (Some(quotient), Some(twist))
    } else {
        (None, None)
    };

    let mut points = Vec::new();
    for i in 1..=m {
        let mut coordinates =
            vec![(dvar(Stem::X), Fraction::var(dcopy(Stem::X, i))), (dvar(Stem::S), Fraction::var(dcopy(Stem::S, i)))];
        if spec.g_uses_u() {
            coordinates.push((dvar(Stem::U), Fraction::var(dcopy(Stem::U, i))));
        }
        for layer in &layers {
            let value = if i == 1 {
                Fraction::one()
            } else {
                Fraction::new(var(dcopy(layer.quotient, i - 1)), (layer.at)(spec, 1))
            };
            coordinates.push((dvar(layer.quotient), value));
        }
        points.push(SymbolicPoint { label: format!("P_{i}"), coordinates });
    }

    let mut notes: Vec<String> = Vec::new();
    if spec.g_uses_u() {
        notes.push(
            "g involves u: s[i] is read as x[i] and g(s[i]) as g(x[i], u[i]); Z-layer checks are convention-dependent"
                .into(),
        );
    }
    if spec.f.is_constant() {
        notes.push("f is constant, so the quadratic layer is degenerate; identities hold formally".into());
    }
    if m == 1 {
        notes.push("m = 1: the quotient is the base itself and there are no twist equations".into());
    }
    Ok(Construction {
        spec: CoverSpec::Dihedral(spec.clone()),
        cover,
        product,
        quotient,
        twist,
        points,
        exponents,
        symmetry: Symmetry::Dihedral { layers: layers_action.clone(), table: GroupTable::dihedral(n as usize) },
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::substitute_fractions;
    use crate::poly::parse;
    use alloc::string::ToString;

    fn p(s: &str) -> QPoly {
        parse(s).unwrap()
    }

    fn build(n: u32, g: &str, m: u32) -> Construction {
        dihedral_pipeline(&DihedralCoverSpec::parse(n, "x^3 - x", g, m).unwrap()).unwrap()
    }

    #[test]
    fn relations_and_twist_system() {
        let c = build(3, "x^2 + 1", 2);
        let q = c.quotient.as_ref().unwrap();
        assert_eq!(q.variety.equations[0], p("U[1]^2 - (x[1]^3 - x[1])*(x[2]^3 - x[2])"));
        assert_eq!(q.variety.equations[1], p("Z[1]^3 - (s[1]^2 + 1)^2*(s[2]^2 + 1)"));
        for eq in &q.variety.equations {
            assert!(q.variety.model.is_zero(eq));
        }
        let t = c.twist.as_ref().unwrap();
        assert_eq!(t.variety.equations[0], p("(x[1]^3 - x[1])*U^2 - (x^3 - x)"));
        assert_eq!(t.variety.equations[1], p("(s[1]^2 + 1)*Z^3 - (s^2 + 1)"));
        assert!(t.variety.stray_variables().is_empty());
        assert!(c.exponents.iter().all(LayerExponents::agrees));
    }

    #[test]
    fn instances_match_copy_form() {
        let c = build(3, "x^2 + 1", 2);
        let t = c.twist.unwrap();
        assert_eq!(t.instances[0].equation, p("(x[1]^3 - x[1])*U^2 - (x[2]^3 - x[2])"));
        assert_eq!(t.instances[1].equation, p("(s[1]^2 + 1)*Z^3 - (s[2]^2 + 1)"));
    }

    #[test]
    fn first_point_satisfies_twist() {
        let c = build(3, "x^2 + 1", 2);
        let t = c.twist.unwrap();
        assert_eq!(c.points[0].to_string(), "P_1 = (x = x[1], s = s[1], U = 1, Z = 1)");
        assert_eq!(
            c.points[1].to_string(),
            "P_2 = (x = x[2], s = s[2], U = U[1]/(x[1]^3 - x[1]), Z = Z[1]/(s[1]^2 + 1))"
        );
        for pt in &c.points {
            for eq in &t.variety.equations {
                let sub = substitute_fractions(eq, &pt.assignment());
                assert!(t.variety.model.reduce_fraction(&sub).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn u_dependent_g_is_flagged() {
        let c = build(2, "x + u", 2);
        assert!(c.notes.iter().any(|n| n.contains("convention-dependent")));
        assert!(c.twist.unwrap().variety.stray_variables().is_empty());
    }
}
