use indexmap::IndexMap;
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::element::{check_pos, GroupElement, Pos};
use super::functional::LinearFunctional;
use super::GroupError;

/// One conjunct of a subgroup predicate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Constraint {
    Entry(Pos),
    Functional(LinearFunctional),
}

impl Constraint {
    pub fn holds(&self, g: &GroupElement) -> bool {
        match self {
            Constraint::Entry(p) => g.entry(*p).is_zero(),
            Constraint::Functional(f) => f.eval(g).is_zero(),
        }
    }
}

/// Integer quotient `pi: K -> Z` with `pi(central) = value`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiSpec {
    pub functional: LinearFunctional,
    pub central: String,
    pub value: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStep {
    /// The next (smaller) subgroup `K_{i+1}`.
    pub subgroup: String,
    /// `lambda_i: K_i -> Z` with kernel `K_{i+1}`.
    pub lambda: LinearFunctional,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSpec {
    pub name: String,
    pub central: String,
    pub k: String,
    pub h: String,
    pub mu: LinearFunctional,
    /// Steps from `K_0 = G` down to `K_n = K`.
    pub chain: Vec<ChainStep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CritCandidate {
    pub central: String,
    pub witnesses: Vec<String>,
}

/// One level `G_j` of the lower central series.
#[derive(Clone, Debug)]
pub struct Level {
    /// Entries vanishing on `G_j` (in addition to nothing else: the predicate is exactly this).
    pub zero: Vec<Pos>,
    pub rank: usize,
    pub projection: Vec<LinearFunctional>,
    /// Names of the graded generators `f_{i,j}`; projections form the standard basis.
    pub generators: Vec<String>,
    pub generator_elements: Vec<GroupElement>,
}

#[derive(Clone, Debug)]
pub struct SubgroupSpec {
    pub name: String,
    pub constraints: Vec<Constraint>,
    pub generator_names: Vec<String>,
    pub generators: Vec<GroupElement>,
    /// Generators of `H_j = H ∩ G_j`, one list per level.
    pub levels: Option<Vec<Vec<GroupElement>>>,
    pub level_names: Option<Vec<Vec<String>>>,
    pub pi: Option<PiSpec>,
    /// Right-K-invariant functionals whose values key the coset `gK`.
    pub canonicalizer: Option<Vec<LinearFunctional>>,
    pub join_center: Option<String>,
}

impl SubgroupSpec {
    pub fn is_member(&self, g: &GroupElement) -> bool {
        self.constraints.iter().all(|c| c.holds(g))
    }

    pub fn coset_key(&self, g: &GroupElement) -> Option<Vec<BigInt>> {
        self.canonicalizer
            .as_ref()
            .map(|fs| fs.iter().map(|f| f.eval(g)).collect())
    }
}

/// A catalog group with resolved elements.
#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub name: String,
    pub dims: Vec<usize>,
    pub abelian: bool,
    pub ambient_zero: Vec<Pos>,
    pub elements: IndexMap<String, GroupElement>,
    /// The letter set: names (`e`, `x`, `x^-1`) and their elements, identity first.
    pub alphabet: Vec<(String, GroupElement)>,
    pub levels: Vec<Level>,
    pub terminal_zero: Vec<Pos>,
    pub subgroups: IndexMap<String, SubgroupSpec>,
    pub central: Vec<String>,
    pub witnesses: IndexMap<String, WitnessSpec>,
    pub crit_candidates: Vec<CritCandidate>,
    pub crit_rationale: String,
}

impl GroupSpec {
    pub fn identity(&self) -> GroupElement {
        GroupElement::identity(&self.dims)
    }

    /// Nilpotency class `m`.
    pub fn class(&self) -> usize {
        self.levels.len()
    }

    pub fn all_positions(&self) -> Vec<Pos> {
        let mut out = Vec::new();
        for (f, &d) in self.dims.iter().enumerate() {
            for r in 0..d {
                for c in r + 1..d {
                    out.push(Pos::new(f, r, c));
                }
            }
        }
        out
    }

    /// Zero set of the `G_j` predicate, `j` in `1..=m+1`.
    pub fn level_zero(&self, j: usize) -> &[Pos] {
        assert!(j >= 1 && j <= self.class() + 1, "level {j} out of range");
        if j == self.class() + 1 {
            &self.terminal_zero
        } else {
            &self.levels[j - 1].zero
        }
    }

    pub fn in_level(&self, j: usize, g: &GroupElement) -> bool {
        self.level_zero(j).iter().all(|&p| g.entry(p).is_zero())
    }

    pub fn in_group(&self, g: &GroupElement) -> bool {
        g.dims() == self.dims && self.ambient_zero.iter().all(|&p| g.entry(p).is_zero())
    }

    /// `phi_j^T(g)`; requires `g ∈ G_j`.
    pub fn project(&self, j: usize, g: &GroupElement) -> Result<Vec<BigInt>, GroupError> {
        if j == 0 || j > self.class() {
            return Err(GroupError::Inconsistent(format!(
                "level {j} outside 1..={}",
                self.class()
            )));
        }
        if !self.in_level(j, g) {
            return Err(GroupError::NotInLevel {
                level: j,
                element: g.to_string(),
            });
        }
        Ok(self.levels[j - 1].projection.iter().map(|f| f.eval(g)).collect())
    }

    pub fn element(&self, name: &str) -> Result<&GroupElement, GroupError> {
        self.elements.get(name).ok_or_else(|| GroupError::UnknownName {
            kind: "element",
            name: name.to_string(),
            available: self.elements.keys().cloned().collect(),
        })
    }

    pub fn subgroup(&self, name: &str) -> Result<&SubgroupSpec, GroupError> {
        self.subgroups.get(name).ok_or_else(|| GroupError::UnknownName {
            kind: "subgroup",
            name: name.to_string(),
            available: self.subgroups.keys().cloned().collect(),
        })
    }

    pub fn witness(&self, name: &str) -> Result<&WitnessSpec, GroupError> {
        self.witnesses.get(name).ok_or_else(|| GroupError::UnknownName {
            kind: "witness",
            name: name.to_string(),
            available: self.witnesses.keys().cloned().collect(),
        })
    }

    pub fn alphabet_elements(&self) -> Vec<GroupElement> {
        self.alphabet.iter().map(|(_, g)| g.clone()).collect()
    }

    pub fn letter_names(&self) -> Vec<String> {
        self.alphabet.iter().map(|(n, _)| n.clone()).collect()
    }

    /// Resolve `x`, `x^-1` or `e` against the named elements.
    pub fn resolve_letter(&self, token: &str) -> Result<GroupElement, GroupError> {
        if token == "e" {
            return Ok(self.identity());
        }
        match token.strip_suffix("^-1") {
            Some(base) => Ok(self.element(base)?.inverse()),
            None => Ok(self.element(token)?.clone()),
        }
    }

    pub(crate) fn check_positions(&self, ps: &[Pos]) -> Result<(), GroupError> {
        ps.iter().try_for_each(|&p| check_pos(&self.dims, p))
    }
}

#[cfg(test)]
mod tests {
    use crate::catalog;

    #[test]
    fn membership_examples() {
        let n3 = catalog::builtin().group("N3").unwrap();
        let z = n3.subgroup("Zcenter").unwrap();
        assert!(z.is_member(n3.element("c").unwrap()));
        assert!(!z.is_member(n3.element("a").unwrap()));

        let n4 = catalog::builtin().group("N4").unwrap();
        let k = n4.subgroup("K_ex74").unwrap();
        assert!(k.is_member(n4.element("b").unwrap()));
    }

    #[test]
    fn projection_examples() {
        let n3 = catalog::builtin().group("N3").unwrap();
        let a = n3.element("a").unwrap();
        let b = n3.element("b").unwrap();
        let c = n3.element("c").unwrap();
        let v: Vec<i64> = n3.project(2, c).unwrap().iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert_eq!(v, vec![1]);
        let v: Vec<i64> = n3.project(1, &a.mul(b)).unwrap().iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert_eq!(v, vec![1, 1]);
        assert!(n3.project(2, a).is_err());

        let n4 = catalog::builtin().group("N4").unwrap();
        let v: Vec<i64> = n4
            .project(3, n4.element("c").unwrap())
            .unwrap()
            .iter()
            .map(|x| i64::try_from(x).unwrap())
            .collect();
        assert_eq!(v, vec![1]);
    }
}
