use alloc::string::String;
use alloc::sync::Arc;
use core::cmp::Ordering;
use core::fmt;

/// Structured variable stems. The declaration order is the variable order
/// used by the monomial ordering (earlier stems are more significant).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stem {
    /// `x`: base coordinates `x[i][e]` of copy `i`, or the generic `x[e]` / `x`.
    X,
    /// `s`: dihedral coordinates on the intermediate double cover.
    S,
    /// `u`: the quadratic layer of a dihedral cover.
    U,
    /// `w`: Kummer radicals `w[i][j]` of an abelian cover.
    W,
    /// `z`: abelian quotient generators `z[i][j]`, or the cyclic layer `z[i]`
    /// of a dihedral cover.
    Z,
    /// `U`: dihedral quotient generators `U[i]` and the twist coordinate `U`.
    BigU,
    /// `Z`: twist coordinates (`Z[i][j]`, `Z[j]`, `Z`) and the dihedral
    /// quotient generators `Z[i]`.
    BigZ,
}

impl Stem {
    pub fn letter(self) -> char {
        match self {
            Stem::X => 'x',
            Stem::S => 's',
            Stem::U => 'u',
            Stem::W => 'w',
            Stem::Z => 'z',
            Stem::BigU => 'U',
            Stem::BigZ => 'Z',
        }
    }

    pub fn from_letter(s: &str) -> Option<Stem> {
        Some(match s {
            "x" => Stem::X,
            "s" => Stem::S,
            "u" => Stem::U,
            "w" => Stem::W,
            "z" => Stem::Z,
            "U" => Stem::BigU,
            "Z" => Stem::BigZ,
            _ => return None,
        })
    }
}

/// Up to two subscripts.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Indices {
    len: u8,
    vals: [u32; 2],
}

impl Indices {
    pub const MAX: usize = 2;

    pub fn new(idx: &[u32]) -> Option<Self> {
        if idx.len() > Self::MAX {
            return None;
        }
        let mut vals = [0; 2];
        vals[..idx.len()].copy_from_slice(idx);
        Some(Indices { len: idx.len() as u8, vals })
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.vals[..self.len as usize]
    }
}

impl Ord for Indices {
    fn cmp(&self, other: &Self) -> Ordering {
        self.as_slice().cmp(other.as_slice())
    }
}

impl PartialOrd for Indices {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Indices {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.as_slice()).finish()
    }
}

/// A polynomial variable: either a structured stem with subscripts, printed
/// as `w[2][1]`, or a free-form name.
///
/// Ordered by stem, then subscripts lexicographically; free-form names sort
/// after every structured variable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarName {
    Indexed { stem: Stem, idx: Indices },
    Named(Arc<str>),
}

impl VarName {
    pub fn indexed(stem: Stem, idx: &[u32]) -> Self {
        VarName::Indexed { stem, idx: Indices::new(idx).expect("at most two subscripts") }
    }

    pub fn named(name: &str) -> Self {
        VarName::Named(Arc::from(name))
    }

    pub fn stem(&self) -> Option<Stem> {
        match self {
            VarName::Indexed { stem, .. } => Some(*stem),
            VarName::Named(_) => None,
        }
    }

    pub fn indices(&self) -> &[u32] {
        match self {
            VarName::Indexed { idx, .. } => idx.as_slice(),
            VarName::Named(_) => &[],
        }
    }

    pub fn is(&self, stem: Stem, arity: usize) -> bool {
        self.stem() == Some(stem) && self.indices().len() == arity
    }

    pub fn to_text(&self) -> String {
        alloc::format!("{self}")
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarName::Indexed { stem, idx } => {
                write!(f, "{}", stem.letter())?;
                for i in idx.as_slice() {
                    write!(f, "[{i}]")?;
                }
                Ok(())
            }
            VarName::Named(s) => f.write_str(s),
        }
    }
}

impl fmt::Debug for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `x[i][e]`
pub fn x(i: u32, e: u32) -> VarName {
    VarName::indexed(Stem::X, &[i, e])
}

/// `w[i][j]`
pub fn w(i: u32, j: u32) -> VarName {
    VarName::indexed(Stem::W, &[i, j])
}

/// `z[i][j]`
pub fn z(i: u32, j: u32) -> VarName {
    VarName::indexed(Stem::Z, &[i, j])
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec::Vec;

    #[test]
    fn ordering_is_stem_then_subscripts() {
        let mut vars = [
            VarName::named("t"),
            w(1, 1),
            x(2, 1),
            x(1, 2),
            VarName::indexed(Stem::X, &[]),
            x(1, 1),
            VarName::indexed(Stem::BigZ, &[1]),
        ];
        vars.sort();
        let text: Vec<_> = vars.iter().map(ToString::to_string).collect();
        assert_eq!(text, ["x", "x[1][1]", "x[1][2]", "x[2][1]", "w[1][1]", "Z[1]", "t"]);
    }
}
