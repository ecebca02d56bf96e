//! Mordell-Weil rank and group-shape predictions for twists, from
//! user-supplied descriptors of the abelian variety involved.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DescriptorError {
    #[error("rk_end must be at least 1")]
    ZeroEndRank,
    #[error("torsion orders must be at least 2, got {0}")]
    BadTorsionOrder(u64),
    #[error("dimension must be positive")]
    ZeroDimension,
}

/// What is known, or asserted, about an abelian variety `A` over `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianVarietyDescriptor {
    pub label: String,
    pub dimension: Option<u32>,
    /// Rank of `End_k(A)` as a `Z`-module.
    pub rk_end: u32,
    /// Cyclic orders of `A[n](k)`.
    pub torsion: Vec<u64>,
    /// The Prym variety has no factor isogenous to `A` beyond the `m` copies.
    pub assert_no_extra_factor: bool,
}

impl AbelianVarietyDescriptor {
    pub fn new(
        label: &str,
        rk_end: u32,
        torsion: Vec<u64>,
        assert_no_extra_factor: bool,
    ) -> Result<Self, DescriptorError> {
        let d =
            AbelianVarietyDescriptor { label: label.into(), dimension: None, rk_end, torsion, assert_no_extra_factor };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<(), DescriptorError> {
        if self.rk_end == 0 {
            return Err(DescriptorError::ZeroEndRank);
        }
        if self.dimension == Some(0) {
            return Err(DescriptorError::ZeroDimension);
        }
        if let Some(&t) = self.torsion.iter().find(|&&t| t < 2) {
            return Err(DescriptorError::BadTorsionOrder(t));
        }
        Ok(())
    }

    /// A user convention: an elliptic curve without complex multiplication.
    pub fn generic_elliptic() -> Self {
        AbelianVarietyDescriptor {
            label: "generic elliptic (convention)".into(),
            dimension: Some(1),
            rk_end: 1,
            torsion: Vec::new(),
            assert_no_extra_factor: true,
        }
    }

    /// A user convention: an elliptic curve with complex multiplication.
    pub fn cm_elliptic() -> Self {
        AbelianVarietyDescriptor {
            label: "CM elliptic (convention)".into(),
            dimension: Some(1),
            rk_end: 2,
            torsion: Vec::new(),
            assert_no_extra_factor: true,
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "generic-elliptic" | "generic elliptic" => Some(Self::generic_elliptic()),
            "cm-elliptic" | "CM elliptic" => Some(Self::cm_elliptic()),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankKind {
    Exact,
    /// The Prym may contain further factors isogenous to `A`.
    LowerBound,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankPrediction {
    pub rank: u64,
    pub kind: RankKind,
    pub notes: Vec<String>,
}

/// `m * rk_end`, exact when no extra factor is asserted, a lower bound
/// otherwise.
pub fn predict_mw_rank(a: &AbelianVarietyDescriptor, m: u32) -> RankPrediction {
    let rank = m as u64 * a.rk_end as u64;
    if a.assert_no_extra_factor {
        RankPrediction { rank, kind: RankKind::Exact, notes: Vec::new() }
    } else {
        RankPrediction {
            rank,
            kind: RankKind::LowerBound,
            notes: alloc::vec!["no-extra-factor hypothesis not asserted: rank is a lower bound".into()],
        }
    }
}

/// `(End_k(A))^m ⊕ A[n](k)`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MWPrediction {
    pub label: String,
    pub copies: u32,
    pub rk_end: u32,
    pub degree: u64,
    pub torsion: Vec<u64>,
    pub rank: u64,
    pub kind: RankKind,
    pub notes: Vec<String>,
}

impl MWPrediction {
    /// Number of free `Z` generators in the shape.
    pub fn free_rank(&self) -> u64 {
        self.copies as u64 * self.rk_end as u64
    }

    pub fn shape(&self) -> String {
        let torsion = if self.torsion.is_empty() {
            String::from("0")
        } else {
            let parts: Vec<String> = self.torsion.iter().map(|t| format!("Z/{t}")).collect();
            parts.join(" ⊕ ")
        };
        format!(
            "(End_k({}))^{} ⊕ {}[{}](k) with {}[{}](k) = {}",
            self.label, self.copies, self.label, self.degree, self.label, self.degree, torsion
        )
    }
}

impl fmt::Display for MWPrediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.kind {
            RankKind::Exact => "",
            RankKind::LowerBound => " (lower bound)",
        };
        writeln!(f, "rank: {}{}", self.rank, tag)?;
        let prefix = match self.kind {
            RankKind::Exact => "group",
            RankKind::LowerBound => "group contains at least",
        };
        writeln!(f, "{prefix}: {}", self.shape())?;
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

/// Structure of the rational points of the twist of `A` over the function
/// field of the quotient: `m` copies of `End_k(A)` plus `A[n](k)`, where
/// `n` is the degree of the cover.
pub fn predict_mw_group(a: &AbelianVarietyDescriptor, m: u32, n: u64) -> MWPrediction {
    let r = predict_mw_rank(a, m);
    MWPrediction {
        label: a.label.clone(),
        copies: m,
        rk_end: a.rk_end,
        degree: n,
        torsion: a.torsion.clone(),
        rank: r.rank,
        kind: r.kind,
        notes: r.notes,
    }
}

/// Rank of the twisted Jacobian of a dihedral cover: `m * rk_end`, using
/// that the Prym of the `m`-fold product over its quotient is `Jac(C)^m`.
pub fn dihedral_jacobian_rank(j: &AbelianVarietyDescriptor, m: u32) -> RankPrediction {
    let mut r = predict_mw_rank(j, m);
    r.notes.push(format!("Prym of the product over the quotient is isogenous to Jac(C)^{m}"));
    r
}
