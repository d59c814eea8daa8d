//! Group catalog: JSON schema, the builder that generates the shipped file, and loading.

mod builder;
mod schema;

use std::sync::OnceLock;

use indexmap::IndexMap;
use sha2::{Digest, Sha256};

pub use builder::build_catalog;
pub use schema::{CatalogDoc, CritDef, GroupDef, LevelDef, SubgroupDef};

use crate::group::{GroupElement, GroupError, GroupSpec, Level, SubgroupSpec};

/// Shipped catalog document.
pub const BUILTIN_JSON: &str = include_str!("../../catalog/groups.json");

#[derive(Debug)]
pub struct Catalog {
    groups: IndexMap<String, GroupSpec>,
    hash: String,
}

impl Catalog {
    pub fn from_json(text: &str) -> Result<Catalog, GroupError> {
        let doc: CatalogDoc = serde_json::from_str(text).map_err(|e| GroupError::Schema(e.to_string()))?;
        let mut groups = IndexMap::new();
        for def in &doc.groups {
            let g = resolve_group(def)?;
            if groups.insert(g.name.clone(), g).is_some() {
                return Err(GroupError::Schema(format!("duplicate group '{}'", def.name)));
            }
        }
        Ok(Catalog {
            groups,
            hash: hex::encode(Sha256::digest(text.as_bytes())),
        })
    }

    pub fn group(&self, name: &str) -> Result<&GroupSpec, GroupError> {
        self.groups.get(name).ok_or_else(|| GroupError::UnknownName {
            kind: "group",
            name: name.to_string(),
            available: self.groups.keys().cloned().collect(),
        })
    }

    pub fn groups(&self) -> impl Iterator<Item = &GroupSpec> {
        self.groups.values()
    }

    /// SHA-256 of the source document, hex encoded.
    pub fn content_hash(&self) -> &str {
        &self.hash
    }
}

pub fn builtin() -> &'static Catalog {
    static CAT: OnceLock<Catalog> = OnceLock::new();
    CAT.get_or_init(|| Catalog::from_json(BUILTIN_JSON).expect("shipped catalog is valid"))
}

/// Pretty JSON exactly as shipped (trailing newline included).
pub fn render_catalog(doc: &CatalogDoc) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("catalog serializes");
    s.push('\n');
    s
}

fn resolve_names(
    elements: &IndexMap<String, GroupElement>,
    names: &[String],
    what: &str,
) -> Result<Vec<GroupElement>, GroupError> {
    names
        .iter()
        .map(|n| {
            elements.get(n).cloned().ok_or_else(|| {
                GroupError::Schema(format!("{what}: unknown element '{n}'"))
            })
        })
        .collect()
}

fn resolve_group(def: &GroupDef) -> Result<GroupSpec, GroupError> {
    let mut elements = IndexMap::new();
    for (n, mats) in &def.elements {
        if n == "e" || n.contains("^-1") || n.contains(char::is_whitespace) {
            return Err(GroupError::Schema(format!("{}: reserved element name '{n}'", def.name)));
        }
        let g = GroupElement::from_matrices(mats)?;
        if g.dims() != def.dims {
            return Err(GroupError::Schema(format!(
                "{}: element '{n}' has factor dimensions {:?}, expected {:?}",
                def.name,
                g.dims(),
                def.dims
            )));
        }
        elements.insert(n.clone(), g);
    }

    let mut levels = Vec::new();
    for (j, l) in def.levels.iter().enumerate() {
        if l.torsion != 0 {
            return Err(GroupError::Schema(format!(
                "{}: level {} declares torsion of order {}; only torsion-free quotients are supported",
                def.name,
                j + 1,
                l.torsion
            )));
        }
        for f in &l.projection {
            f.validate(&def.dims)?;
        }
        levels.push(Level {
            zero: l.zero.clone(),
            rank: l.rank,
            projection: l.projection.clone(),
            generators: l.generators.clone(),
            generator_elements: resolve_names(&elements, &l.generators, &format!("{} level {}", def.name, j + 1))?,
        });
    }

    let mut spec = GroupSpec {
        name: def.name.clone(),
        dims: def.dims.clone(),
        abelian: def.abelian,
        ambient_zero: def.ambient_zero.clone(),
        elements,
        alphabet: Vec::new(),
        levels,
        terminal_zero: def.terminal_zero.clone(),
        subgroups: IndexMap::new(),
        central: def.central.clone(),
        witnesses: IndexMap::new(),
        crit_candidates: def.crit.candidates.clone(),
        crit_rationale: def.crit.rationale.clone(),
    };

    if def.alphabet.first().map(String::as_str) != Some("e") {
        return Err(GroupError::Schema(format!("{}: alphabet must start with e", def.name)));
    }
    for tok in &def.alphabet {
        let g = spec.resolve_letter(tok)?;
        spec.alphabet.push((tok.clone(), g));
    }
    for (n, g) in &spec.alphabet {
        let inv = g.inverse();
        if !spec.alphabet.iter().any(|(_, h)| *h == inv) {
            return Err(GroupError::Schema(format!("{}: alphabet is not closed under inverses ({n})", def.name)));
        }
    }

    for s in &def.subgroups {
        let what = format!("{} subgroup {}", def.name, s.name);
        let generators = resolve_names(&spec.elements, &s.generators, &what)?;
        let levels = s
            .levels
            .as_ref()
            .map(|ls| ls.iter().map(|l| resolve_names(&spec.elements, l, &what)).collect::<Result<Vec<_>, _>>())
            .transpose()?;
        for c in &s.constraints {
            match c {
                crate::group::Constraint::Entry(p) => spec.check_positions(&[*p])?,
                crate::group::Constraint::Functional(f) => f.validate(&spec.dims)?,
            }
        }
        let sub = SubgroupSpec {
            name: s.name.clone(),
            constraints: s.constraints.clone(),
            generator_names: s.generators.clone(),
            generators,
            levels,
            level_names: s.levels.clone(),
            pi: s.pi.clone(),
            canonicalizer: s.canonicalizer.clone(),
            join_center: s.join_center.clone(),
        };
        if spec.subgroups.insert(s.name.clone(), sub).is_some() {
            return Err(GroupError::Schema(format!("{what}: duplicate name")));
        }
    }

    for w in &def.witnesses {
        for n in [&w.k, &w.h].into_iter().chain(w.chain.iter().map(|s| &s.subgroup)) {
            spec.subgroup(n)?;
        }
        spec.element(&w.central)?;
        spec.witnesses.insert(w.name.clone(), w.clone());
    }
    for c in &spec.crit_candidates {
        spec.element(&c.central)?;
        for w in &c.witnesses {
            spec.witness(w)?;
        }
    }
    Ok(spec)
}
