//! Canonical coordinates: peeling by levels, and the weight-controlled exchange sort.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupError, GroupSpec};
use crate::wordmetric::BallRecord;

/// A graded generator `f_{i,j}` (level `j`, index `i`, both 1-based) or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub level: u8,
    pub index: u16,
    pub inverse: bool,
}

impl Letter {
    /// Sort key: level, then index, then sign (an inverse sorts right after its positive).
    pub fn key(&self) -> (u8, u16, bool) {
        (self.level, self.index, self.inverse)
    }

    pub fn inv(self) -> Letter {
        Letter {
            inverse: !self.inverse,
            ..self
        }
    }
}

/// Letters together with their product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    letters: Vec<Letter>,
    product: GroupElement,
}

impl Word {
    pub fn new(canon: &Canon, letters: Vec<Letter>) -> Word {
        let product = canon.evaluate(&letters);
        Word { letters, product }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn product(&self) -> &GroupElement {
        &self.product
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalForm {
    /// `exponents[j-1][i-1] = a_{i,j}`.
    pub exponents: Vec<Vec<BigInt>>,
}

impl CanonicalForm {
    pub fn level_l1(&self, j: usize) -> BigInt {
        self.exponents[j - 1].iter().map(|a| a.abs()).sum()
    }
}

/// Per-group tables: graded letters and cached commutator expansions.
#[derive(Clone, Debug)]
pub struct Canon {
    spec: GroupSpec,
    /// `expansion[(x, y)]` is the canonical word of `[x^-1, y^-1]` for disordered `x y`.
    expansion: HashMap<(Letter, Letter), Vec<Letter>>,
    c_comm: usize,
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{},{}{}", self.index, self.level, if self.inverse { "^-1" } else { "" })
    }
}

fn exp_i64(spec: &GroupSpec, j: usize, a: &BigInt) -> Result<i64> {
    a.to_i64()
        .ok_or_else(|| Error::Domain(format!("exponent {a} at level {j} of {} does not fit a machine word", spec.name)))
}

/// `g = P_1 P_2 ... P_m` with `P_j = Π_i f_{i,j}^{a_{i,j}}`.
pub fn peel_canonical(spec: &GroupSpec, g: &GroupElement) -> Result<CanonicalForm> {
    let mut residual = g.clone();
    let mut exponents = Vec::with_capacity(spec.class());
    for j in 1..=spec.class() {
        let a = spec.project(j, &residual).map_err(|e| match e {
            GroupError::NotInLevel { .. } => Error::Group(GroupError::Inconsistent(format!(
                "residual {residual} left G_{j} while peeling {g}"
            ))),
            e => Error::Group(e),
        })?;
        let mut p = spec.identity();
        for (i, ai) in a.iter().enumerate() {
            if !ai.is_zero() {
                p = p.mul(&spec.levels[j - 1].generator_elements[i].pow(exp_i64(spec, j, ai)?));
            }
        }
        residual = p.inverse().mul(&residual);
        if !spec.in_level(j + 1, &residual) {
            return Err(Error::Group(GroupError::Inconsistent(format!(
                "residual {residual} after level {j} is not in G_{}",
                j + 1
            ))));
        }
        exponents.push(a);
    }
    if !residual.is_identity() {
        return Err(Error::Group(GroupError::Inconsistent(format!("nontrivial residual {residual}"))));
    }
    Ok(CanonicalForm { exponents })
}

pub fn reconstruct(spec: &GroupSpec, cf: &CanonicalForm) -> Result<GroupElement> {
    let mut g = spec.identity();
    for (j, a) in cf.exponents.iter().enumerate() {
        for (i, ai) in a.iter().enumerate() {
            if !ai.is_zero() {
                g = g.mul(&spec.levels[j].generator_elements[i].pow(exp_i64(spec, j + 1, ai)?));
            }
        }
    }
    Ok(g)
}

#[derive(Clone, Debug, Serialize)]
pub struct SortOutcome {
    pub form: CanonicalForm,
    pub steps: usize,
    /// Weight before the first exchange and after each one (empty unless requested).
    #[serde(with = "crate::ratio::vec")]
    pub weights: Vec<BigRational>,
}

impl Canon {
    pub fn new(spec: &GroupSpec) -> Result<Canon> {
        let letters = Canon::all_letters(spec);
        let mut expansion = HashMap::new();
        let mut c_comm = 0;
        for &x in &letters {
            for &y in &letters {
                if x.key() <= y.key() {
                    continue;
                }
                let cx = letter_element(spec, x.inv());
                let cy = letter_element(spec, y.inv());
                let w = form_to_word(&peel_canonical(spec, &cx.commutator(&cy))?)?;
                c_comm = c_comm.max(w.len());
                expansion.insert((x, y), w);
            }
        }
        Ok(Canon {
            spec: spec.clone(),
            expansion,
            c_comm,
        })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// Maximum length of a cached commutator expansion.
    pub fn c_comm(&self) -> usize {
        self.c_comm
    }

    pub fn all_letters(spec: &GroupSpec) -> Vec<Letter> {
        let mut out = Vec::new();
        for (j, l) in spec.levels.iter().enumerate() {
            for i in 0..l.rank {
                for inverse in [false, true] {
                    out.push(Letter {
                        level: (j + 1) as u8,
                        index: (i + 1) as u16,
                        inverse,
                    });
                }
            }
        }
        out
    }

    /// Parse `"b a b a^-1"` into graded letters; `e` tokens are dropped.
    pub fn parse_word(&self, text: &str) -> Result<Vec<Letter>> {
        let mut out = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "e" {
                continue;
            }
            let (base, inverse) = match tok.strip_suffix("^-1") {
                Some(b) => (b, true),
                None => (tok, false),
            };
            out.push(self.letter_named(base, inverse)?);
        }
        Ok(out)
    }

    pub fn letter_named(&self, name: &str, inverse: bool) -> Result<Letter> {
        for (j, l) in self.spec.levels.iter().enumerate() {
            if let Some(i) = l.generators.iter().position(|g| g == name) {
                return Ok(Letter {
                    level: (j + 1) as u8,
                    index: (i + 1) as u16,
                    inverse,
                });
            }
        }
        Err(Error::Group(GroupError::UnknownName {
            kind: "graded generator",
            name: name.into(),
            available: self.spec.levels.iter().flat_map(|l| l.generators.clone()).collect(),
        }))
    }

    pub fn evaluate(&self, word: &[Letter]) -> GroupElement {
        word.iter()
            .fold(self.spec.identity(), |acc, &l| acc.mul(&letter_element(&self.spec, l)))
    }

    /// Exact weight `Σ wt(g_i) + Σ_{disordered i<k} wt(g_i) wt(g_k)`, with
    /// `wt = A^{-(j-1)} n^{-j}` for a level-`j` letter.
    pub fn weight(&self, word: &[Letter], n: u64, a: u64) -> BigRational {
        weight(self.spec.class(), word, n, a)
    }

    pub fn sort_normalize(&self, word: &[Letter], n: u64, a: u64, trace: bool) -> Result<SortOutcome> {
        if n == 0 || a == 0 {
            return Err(Error::Domain("scale n and base A must be at least 1".into()));
        }
        if (a as u128) <= 3 * self.c_comm as u128 {
            return Err(Error::Config(format!(
                "A = {a} must exceed 3·C_comm = {}",
                3 * self.c_comm
            )));
        }
        let m = self.spec.class() as u32;
        let budget = 10u128.saturating_mul((word.len().max(1) as u128).saturating_pow(m + 1));
        let mut w: Vec<Letter> = word.to_vec();
        let mut weights = Vec::new();
        if trace {
            weights.push(self.weight(&w, n, a));
        }
        let mut steps = 0usize;
        loop {
            let mut changed = false;
            let mut i = 0;
            while i + 1 < w.len() {
                let (x, y) = (w[i], w[i + 1]);
                if x.key() > y.key() {
                    let exp = &self.expansion[&(x, y)];
                    w.splice(i..i + 2, [y, x].into_iter().chain(exp.iter().copied()));
                    steps += 1;
                    if steps as u128 > budget {
                        return Err(Error::Budget {
                            what: format!("exchange sort exceeded {budget} steps"),
                            completed_radius: 0,
                        });
                    }
                    if trace {
                        weights.push(self.weight(&w, n, a));
                    }
                    changed = true;
                }
                i += 1;
            }
            if !changed {
                break;
            }
        }
        let mut exponents: Vec<Vec<BigInt>> = self.spec.levels.iter().map(|l| vec![BigInt::zero(); l.rank]).collect();
        for l in &w {
            let e = &mut exponents[l.level as usize - 1][l.index as usize - 1];
            if l.inverse {
                *e -= 1;
            } else {
                *e += 1;
            }
        }
        Ok(SortOutcome {
            form: CanonicalForm { exponents },
            steps,
            weights,
        })
    }
}

pub fn letter_element(spec: &GroupSpec, l: Letter) -> GroupElement {
    let g = &spec.levels[l.level as usize - 1].generator_elements[l.index as usize - 1];
    if l.inverse {
        g.inverse()
    } else {
        g.clone()
    }
}

fn form_to_word(cf: &CanonicalForm) -> Result<Vec<Letter>> {
    let mut w = Vec::new();
    for (j, a) in cf.exponents.iter().enumerate() {
        for (i, ai) in a.iter().enumerate() {
            let k = ai
                .abs()
                .to_usize()
                .ok_or_else(|| Error::Domain("commutator exponent too large".into()))?;
            let l = Letter {
                level: (j + 1) as u8,
                index: (i + 1) as u16,
                inverse: ai.is_negative(),
            };
            w.extend(std::iter::repeat_n(l, k));
        }
    }
    Ok(w)
}

/// Exact weight, computed as an integer numerator over `(A^{m-1} n^m)^2`.
pub fn weight(class: usize, word: &[Letter], n: u64, a: u64) -> BigRational {
    if word.is_empty() {
        return BigRational::zero();
    }
    let m = class as u32;
    let nb = BigInt::from(n);
    let ab = BigInt::from(a);
    // scaled single weights: wt_j * S = A^{m-j} n^{m-j}
    let scaled: Vec<BigInt> = (1..=m)
        .map(|j| num_traits::pow(ab.clone(), (m - j) as usize) * num_traits::pow(nb.clone(), (m - j) as usize))
        .collect();
    let s = num_traits::pow(ab.clone(), (m - 1) as usize) * num_traits::pow(nb.clone(), m as usize);
    let mut singles = BigInt::zero();
    for l in word {
        singles += &scaled[l.level as usize - 1];
    }
    // pairs (i < k) with key_i > key_k: sweep left to right with a sorted prefix table
    let mut keys: Vec<(u8, u16, bool)> = word.iter().map(Letter::key).collect();
    keys.sort();
    keys.dedup();
    let rank = |l: &Letter| keys.binary_search(&l.key()).expect("key present");
    let mut prefix = vec![BigInt::zero(); keys.len()];
    let mut pairs = BigInt::zero();
    for l in word {
        let r = rank(l);
        let bigger: BigInt = prefix[r + 1..].iter().sum();
        if !bigger.is_zero() {
            pairs += bigger * &scaled[l.level as usize - 1];
        }
        prefix[r] += &scaled[l.level as usize - 1];
    }
    let numer = singles * &s + pairs;
    BigRational::new(numer, &s * &s)
}

#[derive(Clone, Debug, Serialize)]
pub struct LengthBoundRow {
    pub n: usize,
    /// `max_{g ∈ B_n} Σ_i |a_{i,j}|`, per level.
    pub max_l1: Vec<String>,
    /// `max_l1[j] / n^j`, per level.
    pub ratio: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LengthBoundReport {
    pub rows: Vec<LengthBoundRow>,
    /// Empirical `C_{A,j}`: the maximum ratio over `n >= 1`, per level.
    pub constants: Vec<f64>,
}

impl LengthBoundReport {
    /// Max ratio at `level` over `n` in `[lo, hi]`.
    pub fn window_max(&self, level: usize, lo: usize, hi: usize) -> f64 {
        self.rows[lo.max(1)..=hi.min(self.rows.len() - 1)]
            .iter()
            .map(|r| r.ratio[level - 1])
            .fold(0.0, f64::max)
    }

    /// `window_max[N/2, N] / window_max[N/4, N/2]` at the report's radius.
    pub fn doubling_ratio(&self, level: usize) -> f64 {
        let n = self.rows.len() - 1;
        let inner = self.window_max(level, n / 4, n / 2);
        if inner == 0.0 {
            return if self.window_max(level, n / 2, n) == 0.0 { 1.0 } else { f64::INFINITY };
        }
        self.window_max(level, n / 2, n) / inner
    }
}

pub fn length_bound_check(spec: &GroupSpec, ball: &BallRecord) -> Result<LengthBoundReport> {
    let m = spec.class();
    let forms: Vec<(usize, Vec<BigInt>)> = (0..ball.len())
        .into_par_iter()
        .map(|i| {
            let cf = peel_canonical(spec, ball.element(i))?;
            Ok((ball.node(i).dist as usize, (1..=m).map(|j| cf.level_l1(j)).collect()))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut per_layer: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); m]; ball.radius() + 1];
    for (d, l1) in forms {
        for j in 0..m {
            if l1[j] > per_layer[d][j] {
                per_layer[d][j] = l1[j].clone();
            }
        }
    }
    let mut rows = Vec::new();
    let mut running = vec![BigInt::zero(); m];
    let mut constants = vec![0.0f64; m];
    for (n, layer) in per_layer.iter().enumerate() {
        for j in 0..m {
            if layer[j] > running[j] {
                running[j] = layer[j].clone();
            }
        }
        let ratio: Vec<f64> = (0..m)
            .map(|j| {
                if n == 0 {
                    0.0
                } else {
                    running[j].to_f64().unwrap_or(f64::INFINITY) / (n as f64).powi(j as i32 + 1)
                }
            })
            .collect();
        if n >= 1 {
            for j in 0..m {
                constants[j] = constants[j].max(ratio[j]);
            }
        }
        rows.push(LengthBoundRow {
            n,
            max_l1: running.iter().map(|x| x.to_string()).collect(),
            ratio,
        });
    }
    Ok(LengthBoundReport { rows, constants })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::wordmetric::{ball, GenSet};
    use num_traits::One;
    use proptest::prelude::*;

    fn ints(v: &[BigInt]) -> Vec<i64> {
        v.iter().map(|x| x.to_i64().unwrap()).collect()
    }

    #[test]
    fn peel_examples() {
        let n3 = catalog::builtin().group("N3").unwrap();
        let cf = peel_canonical(n3, &n3.identity()).unwrap();
        assert!(cf.exponents.iter().flatten().all(Zero::is_zero));

        let a = n3.element("a").unwrap();
        let b = n3.element("b").unwrap();
        let ba = b.mul(a);
        let cf = peel_canonical(n3, &ba).unwrap();
        assert_eq!(ints(&cf.exponents[0]), vec![1, 1]);
        assert_eq!(reconstruct(n3, &cf).unwrap(), ba);
        // b a = a b [b^-1, a^-1] = a b c^-1
        assert_eq!(ints(&cf.exponents[1]), vec![-1]);

        let c5 = n3.element("c").unwrap().pow(5);
        let cf = peel_canonical(n3, &c5).unwrap();
        assert_eq!(ints(&cf.exponents[0]), vec![0, 0]);
        assert_eq!(ints(&cf.exponents[1]), vec![5]);
    }

    #[test]
    fn weight_examples() {
        let n3 = catalog::builtin().group("N3").unwrap();
        let canon = Canon::new(n3).unwrap();
        assert!(canon.weight(&[], 3, 5).is_zero());
        let a = canon.letter_named("a", false).unwrap();
        let b = canon.letter_named("b", false).unwrap();
        for big_a in [1u64, 4, 17] {
            assert_eq!(canon.weight(&[a], 7, big_a), BigRational::new(BigInt::one(), BigInt::from(7)));
        }
        // n level-1 letters, fully reversed order: 1 + (n/2)^2 / n^2 < 2
        let n = 10;
        let word: Vec<Letter> = (0..n).map(|i| if i < 5 { b } else { a }).collect();
        let w = canon.weight(&word, n as u64, 4);
        assert_eq!(w, BigRational::new(BigInt::from(125), BigInt::from(100)));
        assert!(w <= BigRational::from_integer(BigInt::from(2)));
    }

    #[test]
    fn sort_examples() {
        let n3 = catalog::builtin().group("N3").unwrap();
        let canon = Canon::new(n3).unwrap();
        let a = canon.letter_named("a", false).unwrap();
        let b = canon.letter_named("b", false).unwrap();
        let w = Word::new(&canon, vec![b, a]);
        assert_eq!(w.product(), &n3.element("b").unwrap().mul(n3.element("a").unwrap()));
        let sorted = canon.sort_normalize(&[a, b], 2, 4, true).unwrap();
        assert_eq!(sorted.steps, 0);
        assert_eq!(sorted.weights.len(), 1);

        let out = canon.sort_normalize(&[b, a], 2, 4, true).unwrap();
        let g = canon.evaluate(&[b, a]);
        assert_eq!(out.form, peel_canonical(n3, &g).unwrap());
        assert!(out.weights.windows(2).all(|w| w[1] <= w[0]));
        assert!(matches!(canon.sort_normalize(&[b, a], 2, 3, false), Err(Error::Config(_))));
    }

    #[test]
    fn sort_agrees_with_peel_on_small_balls() {
        for name in ["N3", "N4", "H5", "N4p", "N3xN3", "Z3"] {
            let spec = catalog::builtin().group(name).unwrap();
            let canon = Canon::new(spec).unwrap();
            let letters = GenSet::from_spec(spec).unwrap();
            let r = if name == "N3xN3" { 4 } else { 5 };
            let b = ball(&letters, r).unwrap();
            let a = 4 * canon.c_comm().max(1) as u64;
            for (g, _) in b.iter() {
                let word: Vec<Letter> = b
                    .geodesic_word(g)
                    .unwrap()
                    .into_iter()
                    .filter(|&k| k != letters.identity_index())
                    .map(|k| {
                        let nm = letters.name(k);
                        let (base, inv) = nm.strip_suffix("^-1").map_or((nm, false), |s| (s, true));
                        canon.letter_named(base, inv).unwrap()
                    })
                    .collect();
                let out = canon.sort_normalize(&word, word.len().max(1) as u64, a, false).unwrap();
                assert_eq!(out.form, peel_canonical(spec, g).unwrap(), "{name}: {g}");
            }
        }
    }

    #[test]
    fn length_bounds_level_one_lipschitz() {
        let n3 = catalog::builtin().group("N3").unwrap();
        let b = ball(&GenSet::from_spec(n3).unwrap(), 10).unwrap();
        let rep = length_bound_check(n3, &b).unwrap();
        for row in &rep.rows[1..] {
            assert!(row.ratio[0] <= 1.0);
        }
        assert!(rep.doubling_ratio(2) < 1.5);
        let z2 = catalog::builtin().group("Z2").unwrap();
        let rep = length_bound_check(z2, &ball(&GenSet::from_spec(z2).unwrap(), 5).unwrap()).unwrap();
        assert_eq!(rep.constants.len(), 1);
    }

    fn letter_strategy(spec: &'static GroupSpec) -> impl Strategy<Value = Letter> {
        let letters = Canon::all_letters(spec);
        prop::sample::select(letters)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn reconstruction_round_trip(xs in prop::collection::vec(-6i64..6, 6)) {
            let n4 = catalog::builtin().group("N4").unwrap();
            let cf = CanonicalForm {
                exponents: vec![
                    xs[0..3].iter().map(|&x| BigInt::from(x)).collect(),
                    xs[3..5].iter().map(|&x| BigInt::from(x)).collect(),
                    xs[5..6].iter().map(|&x| BigInt::from(x)).collect(),
                ],
            };
            let g = reconstruct(n4, &cf).unwrap();
            prop_assert_eq!(peel_canonical(n4, &g).unwrap(), cf);
        }

        #[test]
        fn weights_never_increase(word in prop::collection::vec(letter_strategy(catalog::builtin().group("N4").unwrap()), 0..14)) {
            let n4 = catalog::builtin().group("N4").unwrap();
            let canon = Canon::new(n4).unwrap();
            let level1: Vec<Letter> = word.into_iter().filter(|l| l.level == 1).collect();
            let n = level1.len().max(1) as u64;
            let a = 4 * canon.c_comm() as u64;
            let out = canon.sort_normalize(&level1, n, a, true).unwrap();
            prop_assert!(out.weights.windows(2).all(|w| w[1] <= w[0]));
            prop_assert_eq!(out.form, peel_canonical(n4, &canon.evaluate(&level1)).unwrap());
        }
    }
}
