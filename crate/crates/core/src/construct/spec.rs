use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::poly::{parse, ParseError, QPoly, Stem, VarName};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum SpecError {
    #[error("dimension ell must be at least 1")]
    ZeroDimension,
    #[error("an abelian cover needs at least one layer")]
    NoLayers,
    #[error("layer {layer}: order n = {n} must be at least 2")]
    OrderTooSmall { layer: usize, n: u32 },
    #[error("orders {0:?} violate the divisibility chain n_1 | n_2 | ... | n_r")]
    BadChain(Vec<u32>),
    #[error("{0} is the zero polynomial")]
    ZeroPolynomial(String),
    #[error("{which} uses variable {var}, which is not allowed there")]
    ForeignVariable { which: String, var: VarName },
    #[error("number of copies m must be at least 1")]
    ZeroCopies,
    #[error("{which}: {error}")]
    Parse { which: String, error: ParseError },
}

/// Generic base coordinate `x[e]` of an abelian cover of `P^ell`.
pub fn base_var(e: u32) -> VarName {
    VarName::indexed(Stem::X, &[e])
}

/// `x[i][e]`, coordinate `e` of copy `i`.
pub fn copy_var(i: u32, e: u32) -> VarName {
    VarName::indexed(Stem::X, &[i, e])
}

/// An abelian cover of `P^ell` in normal form `w_j^{n_j} = f_j(x)`,
/// `n_1 | n_2 | ... | n_r`, together with the number of copies `m` of the
/// fiber product. The `f_j` are written in the generic coordinates `x[e]`.
#[derive(Clone, Debug, PartialEq)]
pub struct AbelianCoverSpec {
    pub ell: u32,
    pub layers: Vec<(u32, QPoly)>,
    pub m: u32,
}

impl AbelianCoverSpec {
    pub fn new(ell: u32, layers: Vec<(u32, QPoly)>, m: u32) -> Result<Self, SpecError> {
        let spec = AbelianCoverSpec { ell, layers, m };
        spec.validate()?;
        Ok(spec)
    }

    /// Parses the `f_j` texts. Base coordinates may be written `x[e]`, `xe`
    /// or, when `ell = 1`, plain `x`.
    pub fn parse(ell: u32, layers: &[(u32, &str)], m: u32) -> Result<Self, SpecError> {
        let layers = layers
            .iter()
            .enumerate()
            .map(|(k, (n, text))| {
                let which = alloc::format!("f_{}", k + 1);
                let p = parse(text).map_err(|error| SpecError::Parse { which, error })?;
                Ok((*n, normalize_abelian_base(&p, ell)))
            })
            .collect::<Result<Vec<_>, SpecError>>()?;
        Self::new(ell, layers, m)
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        if self.ell == 0 {
            return Err(SpecError::ZeroDimension);
        }
        if self.layers.is_empty() {
            return Err(SpecError::NoLayers);
        }
        if self.m == 0 {
            return Err(SpecError::ZeroCopies);
        }
        for (k, (n, _)) in self.layers.iter().enumerate() {
            if *n < 2 {
                return Err(SpecError::OrderTooSmall { layer: k + 1, n: *n });
            }
        }
        let orders = self.orders();
        if !orders.windows(2).all(|w| w[1] % w[0] == 0) {
            return Err(SpecError::BadChain(orders));
        }
        for (k, (_, f)) in self.layers.iter().enumerate() {
            let which = alloc::format!("f_{}", k + 1);
            if f.is_zero() {
                return Err(SpecError::ZeroPolynomial(which));
            }
            let allowed: Vec<VarName> = (1..=self.ell).map(base_var).collect();
            if let Some(var) = f.variables().into_iter().find(|v| !allowed.contains(v)) {
                return Err(SpecError::ForeignVariable { which, var });
            }
        }
        Ok(())
    }

    pub fn r(&self) -> usize {
        self.layers.len()
    }

    pub fn orders(&self) -> Vec<u32> {
        self.layers.iter().map(|(n, _)| *n).collect()
    }

    /// `n_j` for 1-based layer `j`.
    pub fn n(&self, j: u32) -> u32 {
        self.layers[j as usize - 1].0
    }

    /// `d_j = n_j / n_1`.
    pub fn d(&self, j: u32) -> u32 {
        self.n(j) / self.layers[0].0
    }

    /// `f_j` in the generic coordinates.
    pub fn f(&self, j: u32) -> &QPoly {
        &self.layers[j as usize - 1].1
    }

    /// `f_j(x[i][1], ..., x[i][ell])`.
    pub fn f_at(&self, j: u32, i: u32) -> QPoly {
        let map: BTreeMap<VarName, VarName> = (1..=self.ell).map(|e| (base_var(e), copy_var(i, e))).collect();
        self.f(j).rename(&map)
    }

    /// Layers whose `f_j` is constant; the construction still goes through
    /// formally but the layer is disconnected.
    pub fn constant_layers(&self) -> Vec<u32> {
        (1..=self.r() as u32).filter(|&j| self.f(j).is_constant()).collect()
    }
}

impl fmt::Display for AbelianCoverSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "abelian cover of P^{}:", self.ell)?;
        for (k, (n, p)) in self.layers.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, " w[{}]^{} = {}", k + 1, n, p)?;
        }
        write!(f, "; m = {}", self.m)
    }
}

/// Maps `x`, `x<e>` and `x[e]` to the generic coordinate `x[e]`.
pub fn normalize_abelian_base(p: &QPoly, ell: u32) -> QPoly {
    let mut map = BTreeMap::new();
    for v in p.variables() {
        let target = match &v {
            VarName::Indexed { stem: Stem::X, .. } if v.indices().is_empty() && ell == 1 => Some(base_var(1)),
            VarName::Named(name) => name
                .strip_prefix('x')
                .and_then(|d| d.parse::<u32>().ok())
                .filter(|e| (1..=ell).contains(e))
                .map(base_var),
            _ => None,
        };
        if let Some(t) = target {
            map.insert(v, t);
        }
    }
    p.rename(&map)
}

/// Dihedral cover variables, all without subscripts in generic form:
/// `x` on the line, `u` with `u^2 = f(x)`, `z` with `z^n = g(x, u)`.
pub fn dvar(stem: Stem) -> VarName {
    VarName::indexed(stem, &[])
}

/// Copy `i` of a dihedral variable, e.g. `u[i]`.
pub fn dcopy(stem: Stem, i: u32) -> VarName {
    VarName::indexed(stem, &[i])
}

/// A `D_n`-cover of the line through its tower `k(x) ⊂ k(x, u) ⊂ k(x, u, z)`
/// with `u^2 = f(x)` and `z^n = g(x, u)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DihedralCoverSpec {
    pub n: u32,
    pub f: QPoly,
    /// Reduced modulo `u^2 = f`, so of degree at most one in `u`.
    pub g: QPoly,
    pub m: u32,
}

impl DihedralCoverSpec {
    /// Builds the spec, reducing `g` modulo `u^2 = f`.
    pub fn new(n: u32, f: QPoly, g: QPoly, m: u32) -> Result<Self, SpecError> {
        let g = reduce_mod_quadratic(&g, &f);
        let spec = DihedralCoverSpec { n, f, g, m };
        spec.validate()?;
        Ok(spec)
    }

    /// Parses `f` and `g`; `x1`/`x[1]` are accepted for `x`, `u1`/`u[1]`
    /// for `u`.
    pub fn parse(n: u32, f: &str, g: &str, m: u32) -> Result<Self, SpecError> {
        let fp = parse(f).map_err(|error| SpecError::Parse { which: "f".into(), error })?;
        let gp = parse(g).map_err(|error| SpecError::Parse { which: "g".into(), error })?;
        Self::new(n, normalize_dihedral(&fp), normalize_dihedral(&gp), m)
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        if self.n < 2 {
            return Err(SpecError::OrderTooSmall { layer: 1, n: self.n });
        }
        if self.m == 0 {
            return Err(SpecError::ZeroCopies);
        }
        let x = dvar(Stem::X);
        let u = dvar(Stem::U);
        if self.f.is_zero() {
            return Err(SpecError::ZeroPolynomial("f".into()));
        }
        if let Some(var) = self.f.variables().into_iter().find(|v| *v != x) {
            return Err(SpecError::ForeignVariable { which: "f".into(), var });
        }
        if self.g.is_zero() {
            return Err(SpecError::ZeroPolynomial("g (after reduction mod u^2 = f)".into()));
        }
        if let Some(var) = self.g.variables().into_iter().find(|v| *v != x && *v != u) {
            return Err(SpecError::ForeignVariable { which: "g".into(), var });
        }
        Ok(())
    }

    pub fn g_uses_u(&self) -> bool {
        self.g.degree_in(&dvar(Stem::U)) > 0
    }

    /// `f(x[i])`
    pub fn f_at(&self, i: u32) -> QPoly {
        let map = [(dvar(Stem::X), dcopy(Stem::X, i))].into_iter().collect();
        self.f.rename(&map)
    }

    /// `g(x[i], u[i])`
    pub fn g_at(&self, i: u32) -> QPoly {
        let map = [(dvar(Stem::X), dcopy(Stem::X, i)), (dvar(Stem::U), dcopy(Stem::U, i))].into_iter().collect();
        self.g.rename(&map)
    }

    /// `g(s[i])`: `g` with `x -> s[i]` and `u -> u[i]`.
    pub fn g_at_s(&self, i: u32) -> QPoly {
        let map = [(dvar(Stem::X), dcopy(Stem::S, i)), (dvar(Stem::U), dcopy(Stem::U, i))].into_iter().collect();
        self.g.rename(&map)
    }

    /// `g(s)`: `g` with `x -> s`.
    pub fn g_generic_s(&self) -> QPoly {
        let map = [(dvar(Stem::X), dvar(Stem::S))].into_iter().collect();
        self.g.rename(&map)
    }
}

impl fmt::Display for DihedralCoverSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dihedral D_{} cover of P^1: u^2 = {}, z^{} = {}; m = {}", self.n, self.f, self.n, self.g, self.m)
    }
}

fn normalize_dihedral(p: &QPoly) -> QPoly {
    let mut map = BTreeMap::new();
    for v in p.variables() {
        let text = v.to_text();
        let target = match text.as_str() {
            "x1" | "x[1]" => Some(dvar(Stem::X)),
            "u1" | "u[1]" => Some(dvar(Stem::U)),
            _ => None,
        };
        if let Some(t) = target {
            map.insert(v, t);
        }
    }
    p.rename(&map)
}

fn reduce_mod_quadratic(g: &QPoly, f: &QPoly) -> QPoly {
    use crate::coverring::{CoverRelation, CoverRelationSystem};
    let u = dvar(Stem::U);
    if f.variables().contains(&u) {
        return g.clone();
    }
    let sys = CoverRelationSystem::new(
        alloc::vec![CoverRelation::new(u.clone(), 2, f.clone())],
        [(u, 1)].into_iter().collect(),
    )
    .expect("u^2 = f(x) is stratified");
    sys.normal_form(g)
}

/// Either kind of cover specification.
#[derive(Clone, Debug, PartialEq)]
pub enum CoverSpec {
    Abelian(AbelianCoverSpec),
    Dihedral(DihedralCoverSpec),
}

impl CoverSpec {
    pub fn validate(&self) -> Result<(), SpecError> {
        match self {
            CoverSpec::Abelian(s) => s.validate(),
            CoverSpec::Dihedral(s) => s.validate(),
        }
    }

    pub fn m(&self) -> u32 {
        match self {
            CoverSpec::Abelian(s) => s.m,
            CoverSpec::Dihedral(s) => s.m,
        }
    }

    /// Degree of the Galois cover: `|G| = n_1 ... n_r`, resp. `2n`.
    pub fn degree(&self) -> u64 {
        match self {
            CoverSpec::Abelian(s) => s.orders().iter().map(|&n| n as u64).product(),
            CoverSpec::Dihedral(s) => 2 * s.n as u64,
        }
    }

    pub fn with_m(&self, m: u32) -> CoverSpec {
        let mut out = self.clone();
        match &mut out {
            CoverSpec::Abelian(s) => s.m = m,
            CoverSpec::Dihedral(s) => s.m = m,
        }
        out
    }
}

impl fmt::Display for CoverSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverSpec::Abelian(s) => s.fmt(f),
            CoverSpec::Dihedral(s) => s.fmt(f),
        }
    }
}
