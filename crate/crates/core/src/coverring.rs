//! Normal forms modulo a stratified system of pure-power relations
//! `head^e = rhs`, where every `rhs` only involves variables of strictly
//! lower level than its head.
//!
//! Such a system is triangular with monic heads, so the monomials with every
//! head exponent below its relation exponent form a basis of the quotient
//! ring. Rewriting `head^e -> rhs` therefore computes unique representatives
//! and decides ideal membership without any Gröbner machinery.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::poly::{Coefficient, Monomial, MultiPoly, VarName};

#[derive(Clone, Debug, PartialEq)]
pub struct CoverRelation<C: Coefficient> {
    pub head: VarName,
    pub exponent: u32,
    pub rhs: MultiPoly<C>,
}

impl<C: Coefficient> CoverRelation<C> {
    pub fn new(head: VarName, exponent: u32, rhs: MultiPoly<C>) -> Self {
        CoverRelation { head, exponent, rhs }
    }

    /// `head^e - rhs`, the ideal generator.
    pub fn generator(&self) -> MultiPoly<C> {
        let head = MultiPoly::var(self.rhs.domain(), self.head.clone()).pow(self.exponent);
        &head - &self.rhs
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RelationError {
    #[error("relation head {0} appears twice")]
    DuplicateHead(VarName),
    #[error("relation for {head} has exponent {exponent}; need at least 2")]
    ExponentTooSmall { head: VarName, exponent: u32 },
    #[error("relation head {0} must have level at least 1")]
    HeadAtLevelZero(VarName),
    #[error("right-hand side of {head} uses {var}, which is not at a lower level")]
    NotStratified { head: VarName, var: VarName },
}

/// A well-formed stratified relation system. Variables without an explicit
/// level sit at level 0.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverRelationSystem<C: Coefficient> {
    /// Sorted by descending level, then head.
    relations: Vec<CoverRelation<C>>,
    levels: BTreeMap<VarName, u32>,
}

impl<C: Coefficient> CoverRelationSystem<C> {
    pub fn new(relations: Vec<CoverRelation<C>>, levels: BTreeMap<VarName, u32>) -> Result<Self, RelationError> {
        let level = |v: &VarName| levels.get(v).copied().unwrap_or(0);
        let mut seen = alloc::collections::BTreeSet::new();
        for r in &relations {
            if !seen.insert(r.head.clone()) {
                return Err(RelationError::DuplicateHead(r.head.clone()));
            }
            if r.exponent < 2 {
                return Err(RelationError::ExponentTooSmall { head: r.head.clone(), exponent: r.exponent });
            }
            let lh = level(&r.head);
            if lh == 0 {
                return Err(RelationError::HeadAtLevelZero(r.head.clone()));
            }
            if let Some(v) = r.rhs.variables().into_iter().find(|v| level(v) >= lh) {
                return Err(RelationError::NotStratified { head: r.head.clone(), var: v });
            }
        }
        let mut relations = relations;
        relations.sort_by(|a, b| level(&b.head).cmp(&level(&a.head)).then_with(|| a.head.cmp(&b.head)));
        Ok(CoverRelationSystem { relations, levels })
    }

    pub fn empty() -> Self {
        CoverRelationSystem { relations: Vec::new(), levels: BTreeMap::new() }
    }

    pub fn relations(&self) -> &[CoverRelation<C>] {
        &self.relations
    }

    pub fn level(&self, v: &VarName) -> u32 {
        self.levels.get(v).copied().unwrap_or(0)
    }

    pub fn levels(&self) -> &BTreeMap<VarName, u32> {
        &self.levels
    }

    pub fn relation(&self, head: &VarName) -> Option<&CoverRelation<C>> {
        self.relations.iter().find(|r| r.head == *head)
    }

    /// Union of two systems; fails on conflicting heads or levels that break
    /// stratification.
    pub fn merged(&self, other: &Self) -> Result<Self, RelationError> {
        let mut relations = self.relations.clone();
        relations.extend(other.relations.iter().cloned());
        let mut levels = self.levels.clone();
        for (v, l) in &other.levels {
            levels.insert(v.clone(), *l);
        }
        Self::new(relations, levels)
    }

    /// The unique reduced representative of `p`: every head has exponent
    /// below its relation exponent.
    ///
    /// Heads are eliminated in order of descending level; since right-hand
    /// sides only contain lower levels, one pass per relation suffices.
    pub fn normal_form(&self, p: &MultiPoly<C>) -> MultiPoly<C> {
        let mut cur = p.clone();
        for rel in &self.relations {
            if cur.degree_in(&rel.head) < rel.exponent {
                continue;
            }
            let mut powers: Vec<MultiPoly<C>> = alloc::vec![MultiPoly::one(p.domain())];
            let mut out = MultiPoly::zero(p.domain());
            for (m, c) in cur.terms() {
                let (k, rest) = m.split(&rel.head);
                if k < rel.exponent {
                    out.add_term(m.clone(), c.clone());
                    continue;
                }
                let (q, r) = ((k / rel.exponent) as usize, k % rel.exponent);
                while powers.len() <= q {
                    let next = powers.last().expect("nonempty") * &rel.rhs;
                    powers.push(next);
                }
                let kept = rest.mul(&Monomial::var(rel.head.clone()).pow(r));
                for (pm, pc) in powers[q].terms() {
                    out.add_term(pm.mul(&kept), pc.mul_ref(c));
                }
            }
            cur = out;
        }
        cur
    }

    pub fn is_zero_mod(&self, p: &MultiPoly<C>) -> bool {
        self.normal_form(p).is_zero()
    }

    pub fn is_reduced(&self, p: &MultiPoly<C>) -> bool {
        self.relations.iter().all(|r| p.degree_in(&r.head) < r.exponent)
    }

    /// Every place where a single rewrite step applies: a term together with
    /// the index of a relation whose head power divides it.
    pub fn redexes(&self, p: &MultiPoly<C>) -> Vec<Redex> {
        let mut out = Vec::new();
        for (m, _) in p.terms() {
            for (k, rel) in self.relations.iter().enumerate() {
                if m.exponent(&rel.head) >= rel.exponent {
                    out.push(Redex { monomial: m.clone(), relation: k });
                }
            }
        }
        out
    }

    /// Applies `head^e -> rhs` once, to the given term.
    pub fn rewrite_step(&self, p: &MultiPoly<C>, redex: &Redex) -> MultiPoly<C> {
        let rel = &self.relations[redex.relation];
        let c = p.coefficient(&redex.monomial).expect("redex term present").clone();
        let rest = redex
            .monomial
            .div(&Monomial::var(rel.head.clone()).pow(rel.exponent))
            .expect("redex is divisible by the head power");
        let mut out = p.clone();
        out.add_term(redex.monomial.clone(), c.neg_ref());
        for (rm, rc) in rel.rhs.terms() {
            out.add_term(rm.mul(&rest), rc.mul_ref(&c));
        }
        out
    }

    /// Rewrites one step at a time until no redex remains, letting `choose`
    /// pick which redex to contract. The result agrees with
    /// [`normal_form`](Self::normal_form) for every choice function.
    pub fn normal_form_by<F>(&self, p: &MultiPoly<C>, mut choose: F) -> MultiPoly<C>
    where
        F: FnMut(&[Redex]) -> usize,
    {
        let mut cur = p.clone();
        loop {
            let redexes = self.redexes(&cur);
            if redexes.is_empty() {
                return cur;
            }
            let k = choose(&redexes);
            cur = self.rewrite_step(&cur, &redexes[k]);
        }
    }

    /// Termination measure of a single term: head exponents listed from the
    /// highest level down. A rewrite step replaces a term by terms that are
    /// lexicographically smaller under this measure.
    pub fn measure(&self, m: &Monomial) -> Vec<u32> {
        self.relations.iter().map(|r| m.exponent(&r.head)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Redex {
    pub monomial: Monomial,
    pub relation: usize,
}
