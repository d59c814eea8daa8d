use indexmap::IndexMap;
use rayon::prelude::*;

use super::genset::GenSet;
use crate::error::{Error, Result};
use crate::group::{GroupElement, SubgroupSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Node {
    pub dist: u32,
    /// `(letter k, parent index p)` with `element = f_k * store[p]`.
    pub parent: Option<(u16, u32)>,
}

#[derive(Clone, Debug, Default)]
pub struct BallOptions {
    /// Abort once the store would hold more than this many elements.
    pub max_elements: Option<usize>,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
}

/// Word-metric ball `B_N(e)` stored in BFS discovery order.
#[derive(Clone, Debug)]
pub struct BallRecord {
    letters: GenSet,
    radius: usize,
    store: IndexMap<GroupElement, Node>,
    /// `counts[n] = #B_n(e)`; layer `n` occupies `counts[n-1]..counts[n]`.
    counts: Vec<usize>,
}

impl BallRecord {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn letters(&self) -> &GenSet {
        &self.letters
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.store.len()
    }

    pub fn is_empty(&self) -> bool {
        self.store.is_empty()
    }

    /// Elements of `B_n` are the first `count(n)` entries.
    pub fn count(&self, n: usize) -> usize {
        self.counts[n.min(self.radius)]
    }

    pub fn element(&self, i: usize) -> &GroupElement {
        self.store.get_index(i).expect("index in ball").0
    }

    pub fn node(&self, i: usize) -> Node {
        *self.store.get_index(i).expect("index in ball").1
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.store.get_index_of(g)
    }

    pub fn distance(&self, g: &GroupElement) -> Option<usize> {
        self.store.get(g).map(|n| n.dist as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, &Node)> {
        self.store.iter()
    }

    /// Range of store indices forming layer `n` (the sphere of radius `n`).
    pub fn layer(&self, n: usize) -> std::ops::Range<usize> {
        let start = if n == 0 { 0 } else { self.counts[n - 1] };
        start..self.counts[n]
    }

    /// Word `[l_1, .., l_L]` with `g = f_{l_1} ... f_{l_L}` and `L = |g|`.
    pub fn geodesic_word(&self, g: &GroupElement) -> Result<Vec<usize>> {
        let i = self.index_of(g).ok_or_else(|| Error::NotInBall(g.to_string()))?;
        Ok(self.geodesic_word_at(i))
    }

    pub fn geodesic_word_at(&self, mut i: usize) -> Vec<usize> {
        let mut word = Vec::with_capacity(self.node(i).dist as usize);
        while let Some((k, p)) = self.node(i).parent {
            word.push(k as usize);
            i = p as usize;
        }
        word
    }

    /// `counts_H[n] = #(B_n ∩ H)`.
    pub fn relative_count(&self, sub: &SubgroupSpec) -> Vec<usize> {
        let hits: Vec<bool> = self.store.par_keys().map(|g| sub.is_member(g)).collect();
        let mut out = Vec::with_capacity(self.radius + 1);
        let mut acc = 0;
        for n in 0..=self.radius {
            acc += hits[self.layer(n)].iter().filter(|&&b| b).count();
            out.push(acc);
        }
        out
    }

    pub(crate) fn from_parts(letters: GenSet, radius: usize, store: IndexMap<GroupElement, Node>, counts: Vec<usize>) -> Self {
        BallRecord {
            letters,
            radius,
            store,
            counts,
        }
    }
}

pub fn ball(letters: &GenSet, radius: usize) -> Result<BallRecord> {
    ball_with(letters, radius, &BallOptions::default())
}

pub fn ball_with(letters: &GenSet, radius: usize, opts: &BallOptions) -> Result<BallRecord> {
    match opts.workers {
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::Config(e.to_string()))?;
            pool.install(|| enumerate(letters, radius, opts.max_elements))
        }
        None => enumerate(letters, radius, opts.max_elements),
    }
}

fn enumerate(letters: &GenSet, radius: usize, max_elements: Option<usize>) -> Result<BallRecord> {
    let e = GroupElement::identity(&letters.elem(0).dims());
    let mut store: IndexMap<GroupElement, Node> = IndexMap::new();
    store.insert(e, Node { dist: 0, parent: None });
    let mut counts = vec![1usize];
    let skip = letters.identity_index();

    for n in 1..=radius {
        let frontier = if n == 1 { 0..1 } else { counts[n - 2]..counts[n - 1] };
        for k in 0..letters.len() {
            if k == skip {
                continue;
            }
            let f = letters.elem(k);
            let fresh: Vec<(u32, GroupElement)> = frontier
                .clone()
                .into_par_iter()
                .filter_map(|p| {
                    let h = f.mul(store.get_index(p).expect("frontier index").0);
                    (!store.contains_key(&h)).then_some((p as u32, h))
                })
                .collect();
            for (p, h) in fresh {
                if !store.contains_key(&h) {
                    store.insert(
                        h,
                        Node {
                            dist: n as u32,
                            parent: Some((k as u16, p)),
                        },
                    );
                }
            }
            if let Some(cap) = max_elements {
                if store.len() > cap {
                    return Err(Error::Budget {
                        what: format!("ball store exceeded {cap} elements while building layer {n}"),
                        completed_radius: n - 1,
                    });
                }
            }
        }
        counts.push(store.len());
    }
    Ok(BallRecord {
        letters: letters.clone(),
        radius,
        store,
        counts,
    })
}
