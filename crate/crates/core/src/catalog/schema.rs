//! On-disk catalog format.
//!
//! Positions are `[factor, row, col]`, zero-based. Functionals are lists of
//! `[factor, row, col, coeff]`. Matrices are row-major integer arrays, one per factor.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::group::{Constraint, CritCandidate, LinearFunctional, PiSpec, Pos, WitnessSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogDoc {
    pub version: u32,
    pub groups: Vec<GroupDef>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupDef {
    pub name: String,
    pub dims: Vec<usize>,
    #[serde(default)]
    pub abelian: bool,
    #[serde(default)]
    pub ambient_zero: Vec<Pos>,
    pub elements: IndexMap<String, Vec<Vec<Vec<i64>>>>,
    /// Letter set, identity first; entries are `e`, `x` or `x^-1`.
    pub alphabet: Vec<String>,
    pub levels: Vec<LevelDef>,
    pub terminal_zero: Vec<Pos>,
    pub subgroups: Vec<SubgroupDef>,
    #[serde(default)]
    pub central: Vec<String>,
    #[serde(default)]
    pub witnesses: Vec<WitnessSpec>,
    pub crit: CritDef,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelDef {
    pub zero: Vec<Pos>,
    pub rank: usize,
    /// Order of the torsion part of `G_j/G_{j+1}`; only `0` (absent) is accepted.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub torsion: u64,
    pub projection: Vec<LinearFunctional>,
    pub generators: Vec<String>,
}

fn is_zero(x: &u64) -> bool {
    *x == 0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubgroupDef {
    pub name: String,
    pub constraints: Vec<Constraint>,
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi: Option<PiSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonicalizer: Option<Vec<LinearFunctional>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub join_center: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CritDef {
    pub candidates: Vec<CritCandidate>,
    pub rationale: String,
}
