//! Closed-form word-metric balls of the integer Heisenberg group `N3`
//! with letters `{e, a^±1, b^±1}`, for radii far beyond enumeration.
//!
//! An element is `(x, y, z)` = `[[1,x,z],[0,1,y],[0,0,1]]`. For `x, y >= 0` the
//! fiber of `B_n` over `(x, y)` is the z-interval `[xy - M, M]` with
//! `s = floor((n - x - y)/2)` and `M = max_{p+q=s} (x+p)(y+q)`; the sign
//! symmetries `a -> a^-1` and `b -> b^-1` negate `z`.

use std::collections::HashMap;

use num_traits::ToPrimitive;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::sampler::{pad_block, BlockSampler};
use crate::error::{Error, Result};
use crate::group::{GroupElement, Pos};
use crate::wordmetric::GenSet;

type Coord = (i64, i64, i64);

fn mul(g: Coord, h: Coord) -> Coord {
    (g.0 + h.0, g.1 + h.1, g.2 + h.2 + g.0 * h.1)
}

fn inv(g: Coord) -> Coord {
    (-g.0, -g.1, -g.2 + g.0 * g.1)
}

/// Fiber `[lo, hi]` of `B_n` over `(x, y)`, or `None` when empty.
pub fn fiber(n: i64, x: i64, y: i64) -> Option<(i64, i64)> {
    let (bx, by) = (x.abs(), y.abs());
    if bx + by > n {
        return None;
    }
    let s = (n - bx - by) / 2;
    let val = |p: i64| (bx + p) * (by + s - p);
    let v = by + s - bx;
    let mut m = i64::MIN;
    for p in [v.div_euclid(2), v.div_euclid(2) + 1, 0, s] {
        if (0..=s).contains(&p) {
            m = m.max(val(p));
        }
    }
    let (lo, hi) = (bx * by - m, m);
    Some(if x * y < 0 { (-hi, -lo) } else { (lo, hi) })
}

pub fn in_ball(n: i64, g: Coord) -> bool {
    n >= 0 && fiber(n, g.0, g.1).is_some_and(|(lo, hi)| lo <= g.2 && g.2 <= hi)
}

/// Word length `|g|`.
pub fn word_length(g: Coord) -> usize {
    let mut n = g.0.abs() + g.1.abs();
    while !in_ball(n, g) {
        n += 1;
    }
    n as usize
}

/// Number of elements of `B_n`.
pub fn ball_size(n: i64) -> u64 {
    let mut total = 0u64;
    for x in -n..=n {
        let r = n - x.abs();
        for y in -r..=r {
            let (lo, hi) = fiber(n, x, y).expect("inside the diamond");
            total += (hi - lo + 1) as u64;
        }
    }
    total
}

/// Cumulative fiber table for one radius.
#[derive(Debug)]
struct Table {
    cells: Vec<(i64, i64, i64)>,
    /// `start[i]` = number of elements in cells before `i`.
    start: Vec<u64>,
    total: u64,
}

impl Table {
    fn new(n: i64) -> Table {
        let mut cells = Vec::new();
        let mut start = Vec::new();
        let mut total = 0u64;
        for x in -n..=n {
            let r = n - x.abs();
            for y in -r..=r {
                let (lo, hi) = fiber(n, x, y).expect("inside the diamond");
                cells.push((x, y, lo));
                start.push(total);
                total += (hi - lo + 1) as u64;
            }
        }
        Table { cells, start, total }
    }

    fn element(&self, k: u64) -> Coord {
        let i = self.start.partition_point(|&s| s <= k) - 1;
        let (x, y, lo) = self.cells[i];
        (x, y, lo + (k - self.start[i]) as i64)
    }
}

/// Exact uniform sampler on `B_n(N3)` for every radius in a fixed set.
#[derive(Debug)]
pub struct HeisenbergSampler {
    letters: GenSet,
    /// Alphabet index to coordinates.
    coords: Vec<Coord>,
    tables: HashMap<usize, Table>,
}

fn coords_of(g: &GroupElement) -> Result<Coord> {
    let get = |r, c| {
        g.entry(Pos::new(0, r, c))
            .to_i64()
            .ok_or_else(|| Error::Domain("coordinate overflow".into()))
    };
    Ok((get(0, 1)?, get(1, 2)?, get(0, 2)?))
}

impl HeisenbergSampler {
    /// Tables for each radius in `radii`; the letter set must be `{e, a^±1, b^±1}` of `N3`.
    pub fn new(letters: &GenSet, radii: impl IntoIterator<Item = usize>) -> Result<HeisenbergSampler> {
        if letters.elem(0).dims() != vec![3] {
            return Err(Error::Config("closed-form sampler needs a single 3x3 factor".into()));
        }
        let coords = letters.elems().iter().map(coords_of).collect::<Result<Vec<_>>>()?;
        let mut expected = vec![(0, 0, 0), (1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0)];
        let mut got = coords.clone();
        expected.sort();
        got.sort();
        if got != expected {
            return Err(Error::Config(format!(
                "closed-form sampler needs letters e, a^±1, b^±1; got {got:?}"
            )));
        }
        let tables = radii.into_iter().map(|n| (n, Table::new(n as i64))).collect();
        Ok(HeisenbergSampler {
            letters: letters.clone(),
            coords,
            tables,
        })
    }

    pub fn element_of(&self, g: Coord) -> GroupElement {
        GroupElement::from_matrices(&[vec![vec![1, g.0, g.2], vec![0, 1, g.1], vec![0, 0, 1]]])
            .expect("unitriangular")
    }

    /// Geodesic word `[l_1..l_L]` with `g = f_{l_1} ... f_{l_L}`.
    pub fn geodesic(&self, g: Coord) -> Vec<usize> {
        let len = word_length(g);
        let mut word = Vec::with_capacity(len);
        let mut cur = g;
        for m in (1..=len as i64).rev() {
            let k = (0..self.coords.len())
                .find(|&k| self.coords[k] != (0, 0, 0) && in_ball(m - 1, mul(inv(self.coords[k]), cur)))
                .expect("some letter shortens a non-identity element");
            word.push(k);
            cur = mul(inv(self.coords[k]), cur);
        }
        word
    }
}

impl BlockSampler for HeisenbergSampler {
    fn letters(&self) -> &GenSet {
        &self.letters
    }

    fn ball_size(&self, radius: usize) -> Result<u64> {
        self.tables
            .get(&radius)
            .map(|t| t.total)
            .ok_or_else(|| Error::Dependency(format!("no closed-form table for radius {radius}")))
    }

    fn draw_block(&self, radius: usize, rng: &mut ChaCha8Rng) -> Result<(GroupElement, Vec<usize>)> {
        let t = self
            .tables
            .get(&radius)
            .ok_or_else(|| Error::Dependency(format!("no closed-form table for radius {radius}")))?;
        let g = t.element(rng.gen_range(0..t.total));
        let word = self.geodesic(g);
        Ok((self.element_of(g), pad_block(&self.letters, word, radius)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::wordmetric::ball;
    use rand::SeedableRng;

    fn n3_letters() -> GenSet {
        GenSet::from_spec(catalog::builtin().group("N3").unwrap()).unwrap()
    }

    #[test]
    fn closed_form_matches_enumeration() {
        let letters = n3_letters();
        let b = ball(&letters, 24).unwrap();
        for n in 0..=24 {
            assert_eq!(ball_size(n as i64), b.count(n) as u64, "n = {n}");
        }
        for (g, node) in b.iter() {
            assert_eq!(word_length(coords_of(g).unwrap()), node.dist as usize, "{g}");
        }
    }

    #[test]
    fn geodesics_are_words_for_the_element() {
        let letters = n3_letters();
        let s = HeisenbergSampler::new(&letters, [64]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let (g, w) = s.draw_block(64, &mut rng).unwrap();
            assert_eq!(w.len(), 64);
            let rev: Vec<usize> = w.iter().rev().copied().collect();
            assert_eq!(letters.evaluate(&rev), g);
            let c = coords_of(&g).unwrap();
            assert_eq!(s.geodesic(c).len(), word_length(c));
        }
    }

    #[test]
    fn rejects_other_groups() {
        let n4 = GenSet::from_spec(catalog::builtin().group("N4").unwrap()).unwrap();
        assert!(HeisenbergSampler::new(&n4, [4]).is_err());
        let s = HeisenbergSampler::new(&n3_letters(), [4]).unwrap();
        assert!(matches!(s.ball_size(8), Err(Error::Dependency(_))));
    }
}
