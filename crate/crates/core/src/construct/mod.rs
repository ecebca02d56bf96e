//! Fiber products, quotient presentations, twists and their rational points
//! for abelian covers of `P^ell` and dihedral covers of the line.
//!
//! The exponents appearing in the quotient generators and in the quotient
//! and twist equations are found by search: each candidate is tested with
//! the Kummer action or with the rewriting model, and the table of derived
//! values is kept next to the reference values for comparison.

mod abelian;
mod dihedral;
mod spec;
mod variety;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use crate::coverring::{CoverRelation, CoverRelationSystem, RelationError};
use crate::exact::Rational;
use crate::galois::{AbelianGroupSpec, DihedralLayers, GaloisError, GroupTable, KummerAction};
use crate::poly::{QPoly, VarName};

pub use abelian::{
    abelian_construction, fiber_product, invariant_generators, quotient_presentation, rational_points,
    twist_presentation, uniform_exponent_generators,
};
pub use dihedral::dihedral_pipeline;
pub use spec::{
    base_var, copy_var, dcopy, dvar, normalize_abelian_base, AbelianCoverSpec, CoverSpec, DihedralCoverSpec, SpecError,
};
pub use variety::{substitute_fractions, CoverModel, Fraction, ModelError, PresentedVariety, SymbolicPoint};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ConstructError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("this step needs at least two copies (m >= 2)")]
    NeedsTwoCopies,
    #[error("no exponent in {range:?} satisfies the {what} condition")]
    NoConsistentExponent { what: String, range: RangeInclusive<u32> },
    #[error(transparent)]
    Relations(#[from] RelationError),
    #[error(transparent)]
    Galois(#[from] GaloisError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// An exponent found by search, with a flag telling whether it was the only
/// admissible value in the searched range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedExponent {
    pub value: u32,
    pub unique: bool,
}

/// Smallest exponent in `range` for which `ok` holds.
pub fn derive_exponent<F>(what: &str, range: RangeInclusive<u32>, mut ok: F) -> Result<DerivedExponent, ConstructError>
where
    F: FnMut(u32) -> Result<bool, ConstructError>,
{
    let mut found = Vec::new();
    for e in range.clone() {
        if ok(e)? {
            found.push(e);
        }
    }
    match found.first() {
        Some(&value) => Ok(DerivedExponent { value, unique: found.len() == 1 }),
        None => Err(ConstructError::NoConsistentExponent { what: what.into(), range }),
    }
}

/// Derived generator, quotient and twist exponents of one layer, next to
/// the reference values `n_1 - 1`, `n_j - d_j`, `d_j` (abelian) or
/// `1, 1, 1` and `n - 1, n - 1, 1` (dihedral `U` and `Z` layers).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerExponents {
    pub layer: String,
    pub n: u32,
    pub generator: DerivedExponent,
    pub quotient: DerivedExponent,
    pub twist: DerivedExponent,
    pub reference_generator: u32,
    pub reference_quotient: u32,
    pub reference_twist: u32,
}

impl LayerExponents {
    pub fn agrees(&self) -> bool {
        self.generator.value == self.reference_generator
            && self.quotient.value == self.reference_quotient
            && self.twist.value == self.reference_twist
    }

    /// One line per exponent that differs from its reference value.
    pub fn discrepancies(&self) -> Vec<String> {
        let rows = [
            ("generator exponent a", &self.generator, self.reference_generator),
            ("quotient exponent c", &self.quotient, self.reference_quotient),
            ("twist exponent t", &self.twist, self.reference_twist),
        ];
        rows.iter()
            .filter(|(_, d, r)| d.value != *r)
            .map(|(name, d, r)| {
                alloc::format!(
                    "layer {} (n = {}): derived {} = {} differs from reference value {}",
                    self.layer,
                    self.n,
                    name,
                    d.value,
                    r
                )
            })
            .collect()
    }
}

/// A quotient generator: a monomial in the cover radicals fixed by the
/// action it is tested against.
#[derive(Clone, Debug)]
pub struct InvariantGenerator {
    pub name: VarName,
    pub definition: QPoly,
    pub layer: String,
    pub action: KummerAction,
}

#[derive(Clone, Debug)]
pub struct QuotientPresentation {
    pub variety: PresentedVariety,
    pub generators: Vec<InvariantGenerator>,
}

/// One instance `i` of a twist equation together with the substitution
/// that trivializes it over the cover.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistInstance {
    pub copy: u32,
    pub layer: String,
    pub equation: QPoly,
    pub substitution: BTreeMap<VarName, Fraction>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwistPresentation {
    pub variety: PresentedVariety,
    /// Coordinates of the twist written in coordinates of the cover over
    /// the big field; pulling the twist equations back along it must give
    /// ideal members.
    pub trivialization: BTreeMap<VarName, Fraction>,
    pub instances: Vec<TwistInstance>,
}

#[derive(Clone, Debug)]
pub enum Symmetry {
    Abelian { group: AbelianGroupSpec, action: KummerAction },
    Dihedral { layers: DihedralLayers, table: GroupTable },
}

impl Symmetry {
    pub fn table(&self) -> GroupTable {
        match self {
            Symmetry::Abelian { group, .. } => group.table(),
            Symmetry::Dihedral { table, .. } => table.clone(),
        }
    }
}

/// Everything built from one cover specification.
#[derive(Clone, Debug)]
pub struct Construction {
    pub spec: CoverSpec,
    pub cover: PresentedVariety,
    pub product: PresentedVariety,
    /// `None` when `m = 1`.
    pub quotient: Option<QuotientPresentation>,
    /// `None` when `m = 1`.
    pub twist: Option<TwistPresentation>,
    pub points: Vec<SymbolicPoint>,
    pub exponents: Vec<LayerExponents>,
    pub symmetry: Symmetry,
    pub notes: Vec<String>,
}

impl Construction {
    pub fn discrepancies(&self) -> Vec<String> {
        self.exponents.iter().flat_map(LayerExponents::discrepancies).collect()
    }
}

pub fn construct(spec: &CoverSpec) -> Result<Construction, ConstructError> {
    match spec {
        CoverSpec::Abelian(s) => abelian_construction(s),
        CoverSpec::Dihedral(s) => dihedral_pipeline(s),
    }
}

/// Builds a relation system from `(head, exponent, rhs, level)` rows.
pub(crate) fn relation_system(
    rows: Vec<(VarName, u32, QPoly, u32)>,
) -> Result<CoverRelationSystem<Rational>, RelationError> {
    let levels = rows.iter().map(|(h, _, _, l)| (h.clone(), *l)).collect();
    let rels = rows.into_iter().map(|(h, e, r, _)| CoverRelation::new(h, e, r)).collect();
    CoverRelationSystem::new(rels, levels)
}

pub(crate) fn var(v: VarName) -> QPoly {
    QPoly::rational_var(v)
}
