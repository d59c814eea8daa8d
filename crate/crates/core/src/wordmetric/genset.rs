use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};

/// A finite letter set: closed under inverses, containing the identity.
#[derive(Clone, Debug)]
pub struct GenSet {
    names: Vec<String>,
    elems: Vec<GroupElement>,
    inverse: Vec<usize>,
    identity: usize,
}

impl GenSet {
    pub fn new(names: Vec<String>, elems: Vec<GroupElement>) -> Result<GenSet> {
        if names.len() != elems.len() || elems.is_empty() {
            return Err(Error::Config("letter names and elements must be nonempty and aligned".into()));
        }
        if elems.len() > u16::MAX as usize {
            return Err(Error::Config("too many letters".into()));
        }
        let identity = elems
            .iter()
            .position(GroupElement::is_identity)
            .ok_or_else(|| Error::Config("letter set must contain the identity".into()))?;
        let mut inverse = Vec::with_capacity(elems.len());
        for (n, g) in names.iter().zip(&elems) {
            let inv = g.inverse();
            let k = elems
                .iter()
                .position(|h| *h == inv)
                .ok_or_else(|| Error::Config(format!("letter set not closed under inverses: {n}")))?;
            inverse.push(k);
        }
        Ok(GenSet {
            names,
            elems,
            inverse,
            identity,
        })
    }

    pub fn from_spec(spec: &GroupSpec) -> Result<GenSet> {
        GenSet::new(spec.letter_names(), spec.alphabet_elements())
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, k: usize) -> &str {
        &self.names[k]
    }

    pub fn elem(&self, k: usize) -> &GroupElement {
        &self.elems[k]
    }

    pub fn elems(&self) -> &[GroupElement] {
        &self.elems
    }

    pub fn identity_index(&self) -> usize {
        self.identity
    }

    pub fn inverse_of(&self, k: usize) -> usize {
        self.inverse[k]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Product `f_{w_1} f_{w_2} ... f_{w_L}`.
    pub fn evaluate(&self, word: &[usize]) -> GroupElement {
        let mut acc = GroupElement::identity(&self.elems[0].dims());
        for &k in word {
            acc = acc.mul(&self.elems[k]);
        }
        acc
    }

    /// Stable textual description, used in cache keys and manifests.
    pub fn fingerprint(&self) -> String {
        let mut s = String::new();
        for (n, g) in self.names.iter().zip(&self.elems) {
            s.push_str(n);
            s.push('=');
            s.push_str(&g.to_string());
            s.push(';');
        }
        s
    }
}
