//! Cover specification files.
//!
//! ```toml
//! kind = "abelian"
//! ell = 1
//! m = 3
//!
//! [[layers]]
//! n = 2
//! f = "x^3 + 1"
//!
//! [descriptor]
//! rk_end = 1
//! torsion = [2]
//! assert_no_extra_factor = true
//! ```
//!
//! Dihedral files use `kind = "dihedral"` with `n`, `f`, `g` and `m`. Files
//! ending in `.json` are read as JSON with the same fields.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use twistcover_core::construct::{AbelianCoverSpec, CoverSpec, DihedralCoverSpec};
use twistcover_core::rank::AbelianVarietyDescriptor;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Abelian,
    Dihedral,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerEntry {
    pub n: u32,
    pub f: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescriptorEntry {
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default)]
    pub dimension: Option<u32>,
    pub rk_end: u32,
    #[serde(default)]
    pub torsion: Vec<u64>,
    #[serde(default)]
    pub assert_no_extra_factor: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub kind: Kind,
    #[serde(default)]
    pub ell: Option<u32>,
    #[serde(default)]
    pub layers: Vec<LayerEntry>,
    #[serde(default)]
    pub n: Option<u32>,
    #[serde(default)]
    pub f: Option<String>,
    #[serde(default)]
    pub g: Option<String>,
    pub m: u32,
    #[serde(default)]
    pub descriptor: Option<DescriptorEntry>,
}

impl SpecFile {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).context("malformed spec file")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("malformed spec file")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let parsed =
            if path.extension().is_some_and(|e| e == "json") { Self::from_json(&text) } else { Self::from_toml(&text) };
        parsed.with_context(|| format!("in {}", path.display()))
    }

    pub fn cover_spec(&self) -> Result<CoverSpec> {
        let spec = match self.kind {
            Kind::Abelian => {
                if self.n.is_some() || self.f.is_some() || self.g.is_some() {
                    bail!("abelian specs take `layers`, not `n`, `f` or `g`");
                }
                let ell = self.ell.unwrap_or(1);
                let layers: Vec<(u32, &str)> = self.layers.iter().map(|l| (l.n, l.f.as_str())).collect();
                CoverSpec::Abelian(AbelianCoverSpec::parse(ell, &layers, self.m)?)
            }
            Kind::Dihedral => {
                if self.ell.is_some() || !self.layers.is_empty() {
                    bail!("dihedral specs take `n`, `f` and `g`, not `ell` or `layers`");
                }
                let n = self.n.context("dihedral spec is missing `n`")?;
                let f = self.f.as_deref().context("dihedral spec is missing `f`")?;
                let g = self.g.as_deref().context("dihedral spec is missing `g`")?;
                CoverSpec::Dihedral(DihedralCoverSpec::parse(n, f, g, self.m)?)
            }
        };
        Ok(spec)
    }

    pub fn descriptor(&self) -> Result<Option<AbelianVarietyDescriptor>> {
        let Some(d) = &self.descriptor else { return Ok(None) };
        let default_label = match self.kind {
            Kind::Abelian => "Alb",
            Kind::Dihedral => "Jac(C)",
        };
        let label = d.label.as_deref().unwrap_or(default_label);
        let mut out = AbelianVarietyDescriptor::new(label, d.rk_end, d.torsion.clone(), d.assert_no_extra_factor)?;
        out.dimension = d.dimension;
        out.validate()?;
        Ok(Some(out))
    }
}
