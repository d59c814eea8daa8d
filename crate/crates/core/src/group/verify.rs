use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::element::GroupElement;
use super::spec::GroupSpec;
use super::GroupError;

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpecReport {
    pub group: String,
    pub checks: Vec<CheckOutcome>,
}

impl SpecReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn into_result(self) -> Result<SpecReport, GroupError> {
        let first = self.failures().next().map(|f| format!("{}: {}", f.name, f.detail));
        match first {
            Some(msg) => Err(GroupError::Inconsistent(msg)),
            None => Ok(self),
        }
    }
}

struct Recorder {
    checks: Vec<CheckOutcome>,
}

impl Recorder {
    fn check(&mut self, name: impl Into<String>, failure: Option<String>) {
        let name = name.into();
        let (passed, detail) = match failure {
            Some(d) => (false, d),
            None => (true, String::new()),
        };
        self.checks.push(CheckOutcome { name, passed, detail });
    }
}

/// Graded letters of levels `>= j`, with inverses.
fn graded_letters(spec: &GroupSpec, j: usize) -> Vec<(String, GroupElement)> {
    let mut out = Vec::new();
    for lvl in spec.levels.iter().skip(j - 1) {
        for (n, g) in lvl.generators.iter().zip(&lvl.generator_elements) {
            out.push((n.clone(), g.clone()));
            out.push((format!("{n}^-1"), g.inverse()));
        }
    }
    out
}

/// Products of at most two graded letters of level `>= j`: a sample of `G_j`.
fn level_samples(spec: &GroupSpec, j: usize) -> Vec<(String, GroupElement)> {
    let letters = graded_letters(spec, j);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut push = |n: String, g: GroupElement| {
        if seen.insert(g.clone()) {
            out.push((n, g));
        }
    };
    push("e".into(), spec.identity());
    for (n, g) in &letters {
        push(n.clone(), g.clone());
    }
    for (n1, g1) in &letters {
        for (n2, g2) in &letters {
            push(format!("{n1} {n2}"), g1.mul(g2));
        }
    }
    out
}

/// All products of at most `len` letters from the group's letter set.
fn short_words(spec: &GroupSpec, len: usize) -> Vec<GroupElement> {
    let letters = spec.alphabet_elements();
    let mut seen: HashSet<GroupElement> = HashSet::new();
    let mut frontier = vec![spec.identity()];
    seen.insert(spec.identity());
    let mut out = frontier.clone();
    for _ in 0..len {
        let mut next = Vec::new();
        for g in &frontier {
            for f in &letters {
                let h = f.mul(g);
                if seen.insert(h.clone()) {
                    next.push(h.clone());
                    out.push(h);
                }
            }
        }
        frontier = next;
    }
    out
}

fn unit_vector(k: usize, i: usize) -> Vec<BigInt> {
    (0..k).map(|t| if t == i { BigInt::one() } else { BigInt::zero() }).collect()
}

/// Falsifiable checks of the supplied lower-central-series data and subgroup data.
pub fn verify_spec(spec: &GroupSpec) -> SpecReport {
    let mut rec = Recorder { checks: Vec::new() };
    let m = spec.class();

    let positions: Vec<_> = spec
        .ambient_zero
        .iter()
        .chain(spec.terminal_zero.iter())
        .chain(spec.levels.iter().flat_map(|l| l.zero.iter()))
        .copied()
        .collect();
    rec.check(
        "positions",
        spec.check_positions(&positions).err().map(|e| e.to_string()),
    );
    if rec.checks.iter().any(|c| !c.passed) {
        return SpecReport { group: spec.name.clone(), checks: rec.checks };
    }

    let bad: Vec<_> = spec
        .elements
        .iter()
        .filter(|(_, g)| !spec.in_group(g))
        .map(|(n, _)| n.clone())
        .collect();
    rec.check(
        "elements in ambient group",
        (!bad.is_empty()).then(|| format!("elements violate the ambient zero pattern: {}", bad.join(", "))),
    );

    // nestedness of predicates, strict wherever the quotient is nontrivial
    for j in 1..=m {
        let lower: HashSet<_> = if j == 1 {
            spec.ambient_zero.iter().copied().collect()
        } else {
            spec.level_zero(j - 1).iter().copied().collect()
        };
        let cur: HashSet<_> = spec.level_zero(j).iter().copied().collect();
        let next: HashSet<_> = spec.level_zero(j + 1).iter().copied().collect();
        let mut fail = None;
        if !lower.is_subset(&cur) {
            fail = Some(format!("zero set of G_{j} does not contain that of the previous level"));
        } else if !cur.is_subset(&next) {
            fail = Some(format!("G_{} is not contained in G_{j}", j + 1));
        } else if spec.levels[j - 1].rank > 0 && cur == next {
            fail = Some(format!("G_{} equals G_{j} although d_{j} > 0", j + 1));
        }
        rec.check(format!("nested G_{j} ⊇ G_{}", j + 1), fail);
    }
    {
        let covered: HashSet<_> = spec.terminal_zero.iter().chain(&spec.ambient_zero).copied().collect();
        let missing: Vec<_> = spec
            .all_positions()
            .into_iter()
            .filter(|p| !covered.contains(p))
            .map(|p| p.to_string())
            .collect();
        rec.check(
            format!("G_{} trivial", m + 1),
            (!missing.is_empty()).then(|| format!("terminal predicate leaves entries free: {}", missing.join(", "))),
        );
    }

    for (j, lvl) in spec.levels.iter().enumerate() {
        let j = j + 1;
        let mut fail = None;
        if lvl.projection.len() != lvl.rank || lvl.generators.len() != lvl.rank {
            fail = Some(format!(
                "rank {} but {} functionals and {} generators",
                lvl.rank,
                lvl.projection.len(),
                lvl.generators.len()
            ));
        } else {
            for (i, (n, g)) in lvl.generators.iter().zip(&lvl.generator_elements).enumerate() {
                match spec.project(j, g) {
                    Ok(v) if v == unit_vector(lvl.rank, i) => {}
                    Ok(v) => {
                        fail = Some(format!("generator {n} projects to {v:?}, not basis vector {i}"));
                        break;
                    }
                    Err(e) => {
                        fail = Some(format!("generator {n}: {e}"));
                        break;
                    }
                }
            }
        }
        rec.check(format!("level {j} graded generators"), fail);
    }

    // phi_j kills generators of deeper levels
    for j in 1..=m {
        let mut fail = None;
        'outer: for deeper in spec.levels.iter().skip(j) {
            for (n, g) in deeper.generators.iter().zip(&deeper.generator_elements) {
                let v: Vec<BigInt> = spec.levels[j - 1].projection.iter().map(|f| f.eval(g)).collect();
                if v.iter().any(|x| !x.is_zero()) {
                    fail = Some(format!("phi_{j}({n}) = {v:?} is nonzero"));
                    break 'outer;
                }
            }
        }
        rec.check(format!("phi_{j} vanishes on G_{}", j + 1), fail);
    }

    let samples: Vec<Vec<(String, GroupElement)>> = (1..=m).map(|j| level_samples(spec, j)).collect();

    // [G_i, G_j] ⊆ G_{i+j}
    for i in 1..=m {
        for j in i..=m {
            let target = (i + j).min(m + 1);
            let mut fail = None;
            'pairs: for (nx, x) in &samples[i - 1] {
                for (ny, y) in &samples[j - 1] {
                    let c = x.commutator(y);
                    if !spec.in_level(target, &c) {
                        fail = Some(format!("[{nx}, {ny}] = {c} is not in G_{target}"));
                        break 'pairs;
                    }
                }
            }
            rec.check(format!("[G_{i}, G_{j}] ⊆ G_{target}"), fail);
        }
    }
    {
        let ball = short_words(spec, 4);
        let mut fail = None;
        'ball: for x in &ball {
            for j in 1..=m {
                for (ny, y) in graded_letters(spec, j) {
                    let c = x.commutator(&y);
                    let target = (1 + j).min(m + 1);
                    if !spec.in_level(target, &c) {
                        fail = Some(format!("[{x}, {ny}] = {c} is not in G_{target}"));
                        break 'ball;
                    }
                }
            }
        }
        rec.check("[B_4, graded letters] inclusions", fail);
    }

    // projection is a homomorphism on G_j and vanishes exactly on G_{j+1}
    for j in 1..=m {
        let mut fail = None;
        let s = &samples[j - 1];
        'hom: for (nx, x) in s {
            let px = match spec.project(j, x) {
                Ok(v) => v,
                Err(e) => {
                    fail = Some(format!("sample {nx}: {e}"));
                    break;
                }
            };
            let zero = px.iter().all(Zero::is_zero);
            if zero != spec.in_level(j + 1, x) {
                fail = Some(format!("phi_{j}({nx}) zero = {zero} disagrees with G_{} membership", j + 1));
                break;
            }
            for (ny, y) in s.iter().take(40) {
                let py = spec.project(j, y).expect("sample in level");
                let pxy = spec.project(j, &x.mul(y)).expect("level is a subgroup");
                let sum: Vec<BigInt> = px.iter().zip(&py).map(|(a, b)| a + b).collect();
                if pxy != sum {
                    fail = Some(format!("phi_{j}({nx} · {ny}) differs from the sum of projections"));
                    break 'hom;
                }
            }
        }
        rec.check(format!("phi_{j} homomorphism"), fail);
    }

    // central elements
    {
        let letters = spec.alphabet_elements();
        let mut fail = None;
        for n in &spec.central {
            match spec.element(n) {
                Ok(c) => {
                    if let Some(f) = letters.iter().find(|f| !f.commutator(c).is_identity()) {
                        fail = Some(format!("{n} does not commute with letter {f}"));
                        break;
                    }
                }
                Err(e) => {
                    fail = Some(e.to_string());
                    break;
                }
            }
        }
        rec.check("declared central elements commute with all letters", fail);
    }

    for sub in spec.subgroups.values() {
        let mut fail = None;
        if let Some((n, _)) = sub
            .generator_names
            .iter()
            .zip(&sub.generators)
            .find(|(_, g)| !sub.is_member(g))
        {
            fail = Some(format!("generator {n} fails the predicate"));
        }
        if fail.is_none() {
            if let (Some(levels), Some(names)) = (&sub.levels, &sub.level_names) {
                if levels.len() != m {
                    fail = Some(format!("{} level lists for class {m}", levels.len()));
                } else {
                    'lv: for (j, (gs, ns)) in levels.iter().zip(names).enumerate() {
                        for (g, n) in gs.iter().zip(ns) {
                            if !sub.is_member(g) || !spec.in_level(j + 1, g) {
                                fail = Some(format!("H_{} generator {n} is outside H ∩ G_{}", j + 1, j + 1));
                                break 'lv;
                            }
                        }
                    }
                }
            }
        }
        if fail.is_none() {
            if let Some(pi) = &sub.pi {
                match spec.element(&pi.central) {
                    Ok(c) if !sub.is_member(c) => fail = Some(format!("pi central {} not in subgroup", pi.central)),
                    Ok(c) if pi.functional.eval(c) != BigInt::from(pi.value) => {
                        fail = Some(format!("pi({}) != {}", pi.central, pi.value))
                    }
                    Ok(_) => {}
                    Err(e) => fail = Some(e.to_string()),
                }
            }
        }
        if fail.is_none() && sub.canonicalizer.is_some() {
            'canon: for (_, x) in samples[0].iter().take(60) {
                let key = sub.coset_key(x);
                for k in &sub.generators {
                    for kk in [k.clone(), k.inverse()] {
                        if sub.coset_key(&x.mul(&kk)) != key {
                            fail = Some(format!("canonicalizer not right-invariant under generator {kk}"));
                            break 'canon;
                        }
                    }
                }
            }
        }
        if fail.is_none() {
            if let Some(j) = &sub.join_center {
                if let Err(e) = spec.subgroup(j) {
                    fail = Some(e.to_string());
                }
            }
        }
        rec.check(format!("subgroup {}", sub.name), fail);
    }

    SpecReport {
        group: spec.name.clone(),
        checks: rec.checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn catalog_groups_pass() {
        for g in catalog::builtin().groups() {
            let r = verify_spec(g);
            assert!(r.passed(), "{}: {:?}", g.name, r.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn removing_level_two_predicate_breaks_nesting() {
        let mut n3 = catalog::builtin().group("N3").unwrap().clone();
        n3.levels[1].zero.clear();
        let r = verify_spec(&n3);
        assert!(!r.passed());
        assert!(r.failures().any(|f| f.name.starts_with("nested")));
    }

    #[test]
    fn wrong_projection_is_caught() {
        let mut n4 = catalog::builtin().group("N4").unwrap().clone();
        n4.levels[0].projection.swap(0, 1);
        assert!(!verify_spec(&n4).passed());
    }

    #[test]
    fn n4_commutator_in_level_two() {
        let n4 = catalog::builtin().group("N4").unwrap();
        let c = n4.element("a").unwrap().commutator(n4.element("b").unwrap());
        assert!(n4.in_level(2, &c));
        assert!(!c.is_identity());
    }
}
