//! Finite group actions on cover rings.
//!
//! Abelian covers carry the Kummer action: the `j`-th generator multiplies
//! every radical `w[i][j]` by the same primitive root `zeta_{n_j}` for all
//! copies `i` at once, which is the diagonal copy of the group inside the
//! product of the per-copy groups. Dihedral covers carry two layered actions:
//! `sigma` on the cyclic layer and `tau` on the quadratic layer.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::exact::{CycloField, CycloNumber};
use crate::poly::{CycloPoly, MultiPoly, QPoly, Stem, VarName};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GaloisError {
    #[error("no action defined on variable {0}")]
    UndefinedAction(VarName),
    #[error("invariant factors {0:?} do not form a divisibility chain of integers >= 1")]
    BadChain(Vec<u32>),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("composition undefined: {0}")]
    CompositionUndefined(String),
}

/// A finite abelian group `Z/n_1 x ... x Z/n_r` with `n_1 | n_2 | ... | n_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroupSpec {
    factors: Vec<u32>,
}

impl AbelianGroupSpec {
    pub fn new(factors: Vec<u32>) -> Result<Self, GaloisError> {
        let chain_ok = factors.iter().all(|&n| n >= 1) && factors.windows(2).all(|w| w[1] % w[0] == 0);
        if !chain_ok {
            return Err(GaloisError::BadChain(factors));
        }
        Ok(AbelianGroupSpec { factors })
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().map(|&n| n as u64).product()
    }

    /// Exponent of the group, i.e. the largest invariant factor.
    pub fn exponent(&self) -> u32 {
        self.factors.last().copied().unwrap_or(1)
    }

    /// All elements as exponent vectors, in lexicographic order.
    pub fn elements(&self) -> Vec<GroupElement> {
        let mut out = vec![GroupElement(Vec::new())];
        for &n in &self.factors {
            out = out
                .into_iter()
                .flat_map(|g| {
                    (0..n).map(move |a| {
                        let mut v = g.0.clone();
                        v.push(a);
                        GroupElement(v)
                    })
                })
                .collect();
        }
        out
    }

    pub fn generator(&self, j: usize) -> GroupElement {
        let mut v = vec![0; self.factors.len()];
        v[j] = 1;
        GroupElement(v)
    }

    pub fn compose(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(a.0.iter().zip(&b.0).zip(&self.factors).map(|((x, y), n)| (x + y) % n).collect())
    }

    /// Multiplication table with elements indexed as in [`elements`](Self::elements).
    pub fn table(&self) -> GroupTable {
        let elems = self.elements();
        let index = |g: &GroupElement| elems.iter().position(|h| h == g).expect("closed");
        let mul = elems.iter().map(|a| elems.iter().map(|b| index(&self.compose(a, b))).collect()).collect();
        let names = elems.iter().map(|g| format!("{:?}", g.0)).collect();
        GroupTable::new(names, mul).expect("abelian product is a group")
    }
}

/// Exponent vector `(a_1, ..., a_r)` acting by `zeta_{n_j}^{a_j}` on layer `j`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement(pub Vec<u32>);

/// Which variables a generator scales.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalingRule {
    pub stem: Stem,
    /// Match only variables whose last subscript equals this layer.
    pub layer: Option<u32>,
    pub generator: usize,
}

impl ScalingRule {
    fn matches(&self, v: &VarName) -> bool {
        v.stem() == Some(self.stem)
            && match self.layer {
                None => true,
                Some(j) => v.indices().last() == Some(&j),
            }
    }
}

/// A diagonal action of a product of cyclic groups by root-of-unity scaling.
#[derive(Clone, Debug)]
pub struct KummerAction {
    moduli: Vec<u32>,
    rules: Vec<ScalingRule>,
    fixed: Vec<Stem>,
    field: CycloField,
}

impl KummerAction {
    pub fn new(moduli: Vec<u32>, rules: Vec<ScalingRule>, fixed: Vec<Stem>) -> Self {
        let order = moduli.iter().fold(1u32, |acc, &n| num_integer::lcm(acc, n));
        let field = CycloField::new(order).expect("positive moduli");
        KummerAction { moduli, rules, fixed, field }
    }

    /// The diagonal Kummer action of `Z/n_1 x ... x Z/n_r`: generator `j`
    /// scales every `w[.][j]` (and the single-copy `w[j]`) by `zeta_{n_j}`
    /// and fixes the base coordinates.
    pub fn diagonal(group: &AbelianGroupSpec) -> Self {
        let rules = (0..group.factors().len())
            .map(|j| ScalingRule { stem: Stem::W, layer: Some(j as u32 + 1), generator: j })
            .collect();
        Self::new(group.factors().to_vec(), rules, vec![Stem::X])
    }

    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    pub fn num_generators(&self) -> usize {
        self.moduli.len()
    }

    /// The coefficient field `Q(zeta_N)`, `N` the lcm of the moduli.
    pub fn field(&self) -> &CycloField {
        &self.field
    }

    pub fn generator(&self, k: usize) -> GroupElement {
        let mut v = vec![0; self.moduli.len()];
        v[k] = 1;
        GroupElement(v)
    }

    /// `Some(k)` if generator `k` scales `v`; `None` if `v` is fixed.
    pub fn classify(&self, v: &VarName) -> Result<Option<usize>, GaloisError> {
        if let Some(rule) = self.rules.iter().find(|r| r.matches(v)) {
            return Ok(Some(rule.generator));
        }
        match v.stem() {
            Some(s) if self.fixed.contains(&s) => Ok(None),
            _ => Err(GaloisError::UndefinedAction(v.clone())),
        }
    }

    /// Applies `g` to a polynomial with cyclotomic coefficients. The result
    /// lives in `Q(zeta_N)`.
    pub fn apply(&self, g: &GroupElement, p: &CycloPoly) -> Result<CycloPoly, GaloisError> {
        let n = self.field.order();
        let roots: Vec<CycloNumber> = (0..n).map(|k| self.field.zeta_pow(k as i64)).collect();
        let mut out = MultiPoly::zero(&self.field);
        for (m, c) in p.terms() {
            let mut twist: u64 = 0;
            for (v, e) in m.factors() {
                if let Some(k) = self.classify(v)? {
                    let step = (n / self.moduli[k]) as u64;
                    twist += g.0[k] as u64 * *e as u64 * step;
                }
            }
            let root = &roots[(twist % n as u64) as usize];
            out.add_term(m.clone(), c.mul(root));
        }
        Ok(out)
    }

    pub fn apply_rational(&self, g: &GroupElement, p: &QPoly) -> Result<CycloPoly, GaloisError> {
        self.apply(g, &self.lift(p))
    }

    pub fn lift(&self, p: &QPoly) -> CycloPoly {
        p.lift(&self.field).expect("rationals embed in every cyclotomic field")
    }

    /// True iff every generator fixes `p`.
    pub fn is_invariant(&self, p: &QPoly) -> Result<bool, GaloisError> {
        let lifted = self.lift(p);
        for k in 0..self.moduli.len() {
            if self.apply(&self.generator(k), &lifted)? != lifted {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `g(p) - p` for the first generator that moves `p`, if any.
    pub fn invariance_defect(&self, p: &QPoly) -> Result<Option<(usize, CycloPoly)>, GaloisError> {
        let lifted = self.lift(p);
        for k in 0..self.moduli.len() {
            let moved = self.apply(&self.generator(k), &lifted)?;
            if moved != lifted {
                return Ok(Some((k, &moved - &lifted)));
            }
        }
        Ok(None)
    }
}

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    names: Vec<String>,
    mul: Vec<Vec<usize>>,
    identity: usize,
}

impl GroupTable {
    /// Validates closure, identity, inverses and associativity. Associativity
    /// is checked on all triples for groups of order up to 64 and on a fixed
    /// spread of triples beyond that.
    pub fn new(names: Vec<String>, mul: Vec<Vec<usize>>) -> Result<Self, GaloisError> {
        let n = mul.len();
        if n == 0 || names.len() != n || mul.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(GaloisError::NotAGroup("table is not a closed square".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mul[e][x] == x && mul[x][e] == x))
            .ok_or_else(|| GaloisError::NotAGroup("no identity".into()))?;
        for x in 0..n {
            if !(0..n).any(|y| mul[x][y] == identity && mul[y][x] == identity) {
                return Err(GaloisError::NotAGroup(format!("{} has no inverse", names[x])));
            }
        }
        let triples: Vec<(usize, usize, usize)> = if n <= 64 {
            (0..n).flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c)))).collect()
        } else {
            (0..4096).map(|k| ((k * 7919) % n, (k * 104_729 + 1) % n, (k * 15_485_863 + 2) % n)).collect()
        };
        for (a, b, c) in triples {
            if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                return Err(GaloisError::NotAGroup(format!(
                    "({} {}) {} != {} ({} {})",
                    names[a], names[b], names[c], names[a], names[b], names[c]
                )));
            }
        }
        Ok(GroupTable { names, mul, identity })
    }

    pub fn trivial() -> Self {
        GroupTable::new(vec!["1".into()], vec![vec![0]]).expect("trivial group")
    }

    pub fn cyclic(n: usize) -> Self {
        let names = (0..n).map(|k| format!("g^{k}")).collect();
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        GroupTable::new(names, mul).expect("cyclic group")
    }

    /// `D_n = <sigma, tau | sigma^n = tau^2 = 1, tau sigma tau = sigma^-1>`,
    /// element `sigma^a tau^b` stored at index `2a + b`.
    pub fn dihedral(n: usize) -> Self {
        let idx = |a: usize, b: usize| 2 * a + b;
        let mut names = Vec::with_capacity(2 * n);
        for a in 0..n {
            for b in 0..2 {
                names.push(match (a, b) {
                    (0, 0) => "1".into(),
                    (0, 1) => "tau".into(),
                    (a, 0) => format!("sigma^{a}"),
                    (a, _) => format!("sigma^{a} tau"),
                });
            }
        }
        let mut mul = vec![vec![0; 2 * n]; 2 * n];
        for a1 in 0..n {
            for b1 in 0..2 {
                for a2 in 0..n {
                    for b2 in 0..2 {
                        // tau sigma^a = sigma^-a tau
                        let a2_eff = if b1 == 1 { (n - a2) % n } else { a2 };
                        mul[idx(a1, b1)][idx(a2, b2)] = idx((a1 + a2_eff) % n, (b1 + b2) % 2);
                    }
                }
            }
        }
        GroupTable::new(names, mul).expect("dihedral group")
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn compose(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.order()).find(|&b| self.mul[a][b] == self.identity).expect("validated group")
    }

    pub fn power(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul[acc][a])
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul[x][a];
            k += 1;
        }
        k
    }
}

/// The cocycle condition `a_{gh} = a_g * a_h` for a map `a: G -> Aut`, in the
/// case where `G` acts trivially on the automorphisms (so a cocycle is a
/// homomorphism). `a[g]` is the index of the automorphism attached to `g`.
pub fn cocycle_check(group: &GroupTable, auts: &GroupTable, a: &[usize]) -> Result<bool, GaloisError> {
    if a.len() != group.order() {
        return Err(GaloisError::CompositionUndefined(format!(
            "cocycle has {} values for a group of order {}",
            a.len(),
            group.order()
        )));
    }
    if let Some(&bad) = a.iter().find(|&&x| x >= auts.order()) {
        return Err(GaloisError::CompositionUndefined(format!("automorphism label {bad} out of range")));
    }
    let n = group.order();
    Ok((0..n).all(|g| (0..n).all(|h| a[group.compose(g, h)] == auts.compose(a[g], a[h]))))
}

/// The inclusion `a_g = g`, as a map into the same table.
pub fn inclusion_cocycle(group: &GroupTable) -> Vec<usize> {
    (0..group.order()).collect()
}

/// Checks `tau sigma tau = sigma^-1`, `sigma^n = tau^2 = 1` on a table whose
/// elements are named as in [`GroupTable::dihedral`].
pub fn dihedral_relations_hold(table: &GroupTable, n: usize) -> bool {
    let (Some(sigma), Some(tau)) = (table.index_of(if n == 1 { "1" } else { "sigma^1" }), table.index_of("tau")) else {
        return false;
    };
    let tst = table.compose(table.compose(tau, sigma), tau);
    table.power(sigma, n) == table.identity()
        && table.compose(tau, tau) == table.identity()
        && tst == table.inverse(sigma)
}

/// The two layers of a dihedral cover `C -> W -> P^1`: `sigma` scales the
/// cyclic-layer variable by `zeta_n`, `tau` negates the quadratic-layer
/// variable.
#[derive(Clone, Debug)]
pub struct DihedralLayers {
    pub n: u32,
    pub sigma: KummerAction,
    pub tau: KummerAction,
}

impl DihedralLayers {
    /// `sigma^n` acting on `z` and `tau^2` acting on `u`, each compared with
    /// the identity.
    pub fn layer_orders_hold(&self) -> Result<bool, GaloisError> {
        let z = QPoly::rational_var(VarName::indexed(Stem::Z, &[]));
        let u = QPoly::rational_var(VarName::indexed(Stem::U, &[]));
        let sigma_n = GroupElement(vec![self.n]);
        let tau_2 = GroupElement(vec![2]);
        let s1 = self.sigma.apply_rational(&GroupElement(vec![1]), &z)?;
        let t1 = self.tau.apply_rational(&GroupElement(vec![1]), &u)?;
        Ok(self.sigma.apply_rational(&sigma_n, &z)? == self.sigma.lift(&z)
            && self.tau.apply_rational(&tau_2, &u)? == self.tau.lift(&u)
            && s1 != self.sigma.lift(&z)
            && t1 != self.tau.lift(&u))
    }
}

pub fn dihedral_layer_actions(n: u32) -> DihedralLayers {
    assert!(n >= 2, "dihedral order must be at least 2");
    let sigma = KummerAction::new(
        vec![n],
        vec![ScalingRule { stem: Stem::Z, layer: None, generator: 0 }],
        vec![Stem::X, Stem::S, Stem::U],
    );
    let tau = KummerAction::new(
        vec![2],
        vec![ScalingRule { stem: Stem::U, layer: None, generator: 0 }],
        vec![Stem::X, Stem::S],
    );
    DihedralLayers { n, sigma, tau }
}

/// Composition check for an actual action: `(g h)(p) = g(h(p))` for every
/// pair of group elements.
pub fn action_is_homomorphic(
    group: &AbelianGroupSpec,
    action: &KummerAction,
    probe: &QPoly,
) -> Result<bool, GaloisError> {
    let elems = group.elements();
    let lifted = action.lift(probe);
    let images: Vec<CycloPoly> = elems.iter().map(|g| action.apply(g, &lifted)).collect::<Result<_, _>>()?;
    for g in &elems {
        for (hi, h) in elems.iter().enumerate() {
            let gh = group.compose(g, h);
            let lhs = action.apply(&gh, &lifted)?;
            let rhs = action.apply(g, &images[hi])?;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Raises `p` in the action's field to a rational polynomial, if all its
/// coefficients are rational.
pub fn to_rational(p: &CycloPoly) -> Option<QPoly> {
    p.try_map(&(), |c| c.as_rational().cloned())
}
