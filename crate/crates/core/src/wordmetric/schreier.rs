use std::collections::HashMap;

use num_bigint::BigInt;

use super::genset::GenSet;
use crate::error::{Error, Result};
use crate::group::{GroupElement, SubgroupSpec};

/// Default cap on cosets per layer for the pairwise-comparison fallback.
pub const DEFAULT_LAYER_CAP: usize = 100_000;

#[derive(Clone, Debug)]
pub struct Coset {
    /// Representative `h_v`: the first element found, of minimal word length.
    pub rep: GroupElement,
    pub dist: u32,
    /// `(letter k, parent coset p)` with `h_v = f_k h_p`.
    pub parent: Option<(u16, u32)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CosetMode {
    Canonical,
    Pairwise,
}

#[derive(Clone, Debug)]
pub struct SchreierOptions {
    pub mode: Option<CosetMode>,
    pub layer_cap: usize,
}

impl Default for SchreierOptions {
    fn default() -> Self {
        SchreierOptions {
            mode: None,
            layer_cap: DEFAULT_LAYER_CAP,
        }
    }
}

/// Ball of radius `N` in the Schreier graph of `G/K`.
#[derive(Clone, Debug)]
pub struct SchreierBall {
    sub: SubgroupSpec,
    letters: GenSet,
    radius: usize,
    cosets: Vec<Coset>,
    counts: Vec<usize>,
    keys: Option<HashMap<Vec<BigInt>, u32>>,
    /// `next[v][k]` = coset of `f_k h_v`, if inside the ball.
    next: Vec<Vec<Option<u32>>>,
    mode: CosetMode,
}

impl SchreierBall {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn subgroup(&self) -> &SubgroupSpec {
        &self.sub
    }

    pub fn letters(&self) -> &GenSet {
        &self.letters
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    pub fn mode(&self) -> CosetMode {
        self.mode
    }

    pub fn coset(&self, v: usize) -> &Coset {
        &self.cosets[v]
    }

    pub fn cosets(&self) -> &[Coset] {
        &self.cosets
    }

    pub fn norm(&self, v: usize) -> usize {
        self.cosets[v].dist as usize
    }

    /// Coset index reached from `v` by letter `k`, if it lies in the ball.
    pub fn step(&self, v: usize, k: usize) -> Option<usize> {
        self.next[v][k].map(|u| u as usize)
    }

    /// Index of the coset `gK`, if it lies in the ball.
    pub fn locate(&self, g: &GroupElement) -> Option<usize> {
        match &self.keys {
            Some(keys) => {
                let key = self.sub.coset_key(g).expect("canonical mode has a key");
                keys.get(&key).map(|&v| v as usize)
            }
            None => {
                let gi = g.inverse();
                self.cosets
                    .iter()
                    .position(|c| self.sub.is_member(&gi.mul(&c.rep)))
            }
        }
    }

    /// Letters of a shortest path from `eK` to `v`: `h_v = f_{l_1} ... f_{l_L}`.
    pub fn word(&self, mut v: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while let Some((k, p)) = self.cosets[v].parent {
            w.push(k as usize);
            v = p as usize;
        }
        w
    }
}

pub fn schreier_ball(letters: &GenSet, sub: &SubgroupSpec, radius: usize) -> Result<SchreierBall> {
    schreier_ball_with(letters, sub, radius, &SchreierOptions::default())
}

pub fn schreier_ball_with(
    letters: &GenSet,
    sub: &SubgroupSpec,
    radius: usize,
    opts: &SchreierOptions,
) -> Result<SchreierBall> {
    let mode = match opts.mode {
        Some(CosetMode::Canonical) if sub.canonicalizer.is_none() => {
            return Err(Error::Config(format!("subgroup {} has no canonicalizer", sub.name)))
        }
        Some(m) => m,
        None if sub.canonicalizer.is_some() => CosetMode::Canonical,
        None => CosetMode::Pairwise,
    };
    let e = GroupElement::identity(&letters.elem(0).dims());
    let mut cosets = vec![Coset {
        rep: e.clone(),
        dist: 0,
        parent: None,
    }];
    let mut keys: Option<HashMap<Vec<BigInt>, u32>> = (mode == CosetMode::Canonical).then(HashMap::new);
    if let Some(k) = keys.as_mut() {
        k.insert(sub.coset_key(&e).expect("canonicalizer"), 0);
    }
    let mut counts = vec![1usize];
    let skip = letters.identity_index();

    // pairwise: is gK one of the cosets with index in `range`?
    let find_pairwise = |cosets: &[Coset], range: std::ops::Range<usize>, g: &GroupElement| -> Option<usize> {
        let gi = g.inverse();
        range.into_iter().find(|&i| sub.is_member(&gi.mul(&cosets[i].rep)))
    };

    for n in 1..=radius {
        let prev_start = if n >= 3 { counts[n - 3] } else { 0 };
        let frontier = if n == 1 { 0..1 } else { counts[n - 2]..counts[n - 1] };
        for k in 0..letters.len() {
            if k == skip {
                continue;
            }
            for p in frontier.clone() {
                let h = letters.elem(k).mul(&cosets[p].rep);
                let known = match keys.as_mut() {
                    Some(map) => map.contains_key(&sub.coset_key(&h).expect("canonicalizer")),
                    None => find_pairwise(&cosets, prev_start..cosets.len(), &h).is_some(),
                };
                if known {
                    continue;
                }
                if let Some(map) = keys.as_mut() {
                    map.insert(sub.coset_key(&h).expect("canonicalizer"), cosets.len() as u32);
                }
                cosets.push(Coset {
                    rep: h,
                    dist: n as u32,
                    parent: Some((k as u16, p as u32)),
                });
                if mode == CosetMode::Pairwise && cosets.len() - counts[n - 1] > opts.layer_cap {
                    return Err(Error::Budget {
                        what: format!(
                            "pairwise coset comparison exceeded {} cosets in layer {n} of G/{}",
                            opts.layer_cap, sub.name
                        ),
                        completed_radius: n - 1,
                    });
                }
            }
        }
        counts.push(cosets.len());
    }

    // transition table; neighbours of layer n lie in layers n-1, n, n+1
    let mut next = Vec::with_capacity(cosets.len());
    for (v, c) in cosets.iter().enumerate() {
        let d = c.dist as usize;
        let lo = if d >= 2 { counts[d - 2] } else { 0 };
        let hi = counts[(d + 1).min(radius)];
        let row = (0..letters.len())
            .map(|k| {
                if k == skip {
                    return Some(v as u32);
                }
                let h = letters.elem(k).mul(&c.rep);
                match &keys {
                    Some(map) => map.get(&sub.coset_key(&h).expect("canonicalizer")).copied(),
                    None => find_pairwise(&cosets, lo..hi, &h).map(|u| u as u32),
                }
            })
            .collect();
        next.push(row);
    }

    Ok(SchreierBall {
        sub: sub.clone(),
        letters: letters.clone(),
        radius,
        cosets,
        counts,
        keys,
        next,
        mode,
    })
}
