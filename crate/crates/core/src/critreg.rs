//! Stabilizer-subgroup witnesses and critical regularity values.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{CheckOutcome, GroupElement, GroupSpec, LinearFunctional, SubgroupSpec, WitnessSpec};
use crate::growth::schreier_degree;

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub group: String,
    pub witness: String,
    pub central: String,
    pub clauses: Vec<CheckOutcome>,
    /// `gr(G/K)`, present when the subgroup carries level data.
    pub schreier_degree: Option<usize>,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckOutcome> {
        self.clauses.iter().find(|c| !c.passed)
    }
}

struct Clauses(Vec<CheckOutcome>);

impl Clauses {
    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.0.push(CheckOutcome {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }
}

/// Generators together with their inverses.
fn symmetric(gens: &[GroupElement]) -> Vec<GroupElement> {
    gens.iter().flat_map(|g| [g.clone(), g.inverse()]).collect()
}

fn gcd_of(values: impl IntoIterator<Item = BigInt>) -> BigInt {
    values.into_iter().fold(BigInt::zero(), |acc, v| acc.gcd(&v))
}

/// Checks that `f: big -> Z` is a surjective homomorphism with kernel `small`,
/// on generators and products of generator pairs. Clause names are prefixed by `tag`.
fn check_quotient(
    out: &mut Clauses,
    tag: &str,
    f: &LinearFunctional,
    big: &SubgroupSpec,
    small: &SubgroupSpec,
) {
    let gens = symmetric(&big.generators);
    let mut bad_hom = None;
    'outer: for x in &gens {
        for y in &gens {
            if f.eval(&x.mul(y)) != f.eval(x) + f.eval(y) {
                bad_hom = Some(format!("{tag}({x} {y}) is not additive"));
                break 'outer;
            }
        }
    }
    out.push(format!("{tag}_homomorphism"), bad_hom.is_none(), bad_hom.unwrap_or_default());

    let g = gcd_of(big.generators.iter().map(|x| f.eval(x)));
    out.push(
        format!("{tag}_surjective"),
        g.is_one(),
        format!("gcd of {tag} over generators of {} is {g}", big.name),
    );

    let mut kernel_fail = Vec::new();
    for h in &small.generators {
        if !big.is_member(h) {
            kernel_fail.push(format!("{h} is not in {}", big.name));
        }
        if !f.eval(h).is_zero() {
            kernel_fail.push(format!("{tag}({h}) = {}", f.eval(h)));
        }
    }
    // every generator, and every product of two, lies in small·<t> with the predicted power of t
    match gens.iter().find(|t| f.eval(t).is_one()) {
        None => kernel_fail.push(format!("no generator of {} has {tag} = 1", big.name)),
        Some(t) => {
            let mut probes = gens.clone();
            for x in &gens {
                for y in &gens {
                    probes.push(x.mul(y));
                }
            }
            for k in &probes {
                let Some(p) = f.eval(k).to_i64() else {
                    kernel_fail.push(format!("{tag}({k}) overflows"));
                    continue;
                };
                let r = k.mul(&t.pow(-p));
                if !small.is_member(&r) {
                    kernel_fail.push(format!("{r} has {tag} = 0 but is not in {}", small.name));
                    break;
                }
            }
        }
    }
    out.push(format!("{tag}_kernel"), kernel_fail.is_empty(), kernel_fail.join("; "));
}

fn check_normal(out: &mut Clauses, tag: &str, big: &SubgroupSpec, small: &SubgroupSpec) {
    let mut fail = Vec::new();
    for y in &small.generators {
        if !big.is_member(y) {
            fail.push(format!("{y} is not in {}", big.name));
        }
        for x in symmetric(&big.generators) {
            let z = y.conjugate_by(&x);
            if !small.is_member(&z) {
                fail.push(format!("{x} conjugates {y} out of {}", small.name));
            }
        }
    }
    out.push(format!("{tag}_normal"), fail.is_empty(), fail.join("; "));
}

/// Evaluate every clause; never fails on a clause, only on unresolvable names.
pub fn check_witness(spec: &GroupSpec, w: &WitnessSpec) -> Result<WitnessReport> {
    let mut out = Clauses(Vec::new());
    let c = spec.element(&w.central)?;
    let k = spec.subgroup(&w.k)?;
    let h = spec.subgroup(&w.h)?;
    let whole = spec.subgroup("whole")?;

    let letters = spec.alphabet_elements();
    let central = !c.is_identity() && letters.iter().all(|f| f.mul(c) == c.mul(f));
    out.push("central", central, format!("{} must be a nontrivial central element", w.central));
    out.push("central_in_K", k.is_member(c), format!("{} in {}", w.central, w.k));

    let mu_c = w.mu.eval(c);
    out.push(
        "mu_central_nonzero",
        !mu_c.is_zero(),
        format!("mu({}) = {mu_c}; H ∩ <c> must be trivial", w.central),
    );
    check_quotient(&mut out, "mu", &w.mu, k, h);

    // chain G = K_0 > K_1 > ... > K_n = K
    let mut prev = whole;
    for (i, step) in w.chain.iter().enumerate() {
        let next = spec.subgroup(&step.subgroup)?;
        check_quotient(&mut out, &format!("lambda{i}"), &step.lambda, prev, next);
        check_normal(&mut out, &format!("chain{i}"), prev, next);
        prev = next;
    }
    out.push(
        "chain_ends_at_K",
        prev.name == k.name,
        format!("chain ends at {}, witness names {}", prev.name, k.name),
    );

    let schreier = if k.levels.is_some() {
        Some(schreier_degree(spec, k)?)
    } else {
        None
    };
    Ok(WitnessReport {
        group: spec.name.clone(),
        witness: w.name.clone(),
        central: w.central.clone(),
        clauses: out.0,
        schreier_degree: schreier,
    })
}

/// Like [`check_witness`], but a failing clause becomes a verification error.
pub fn verify_witness(spec: &GroupSpec, w: &WitnessSpec) -> Result<WitnessReport> {
    let r = check_witness(spec, w)?;
    match r.first_failure() {
        Some(f) => Err(Error::Verification {
            clause: f.name.clone(),
            detail: format!("{}/{}: {}", spec.name, w.name, f.detail),
        }),
        None => Ok(r),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CritValue {
    Finite(BigRational),
    /// Some witness has `gr(G/K) = 0`.
    Unbounded,
}

impl fmt::Display for CritValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CritValue::Finite(r) => write!(f, "{}", crate::ratio::to_string(r)),
            CritValue::Unbounded => write!(f, "UNBOUNDED"),
        }
    }
}

impl Serialize for CritValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl CritValue {
    fn from_degree(d: usize) -> CritValue {
        if d == 0 {
            CritValue::Unbounded
        } else {
            CritValue::Finite(BigRational::one() + BigRational::new(BigInt::one(), BigInt::from(d)))
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ElementCrit {
    pub central: String,
    pub min_degree: usize,
    /// Witness attaining the minimum.
    pub attained_by: String,
    pub value: CritValue,
}

/// `1 + 1/min_K gr(G/K)` over verified witnesses for `c`.
pub fn crit_for_element(spec: &GroupSpec, central: &str, witnesses: &[&WitnessSpec]) -> Result<ElementCrit> {
    if witnesses.is_empty() {
        return Err(Error::Config(format!(
            "{}: at least one candidate witness is needed for {central}",
            spec.name
        )));
    }
    let mut best: Option<(usize, String)> = None;
    for w in witnesses {
        if w.central != central {
            return Err(Error::Config(format!(
                "witness {} is for {}, not {central}",
                w.name, w.central
            )));
        }
        let r = verify_witness(spec, w)?;
        let d = r.schreier_degree.ok_or_else(|| {
            Error::Config(format!("witness subgroup {} has no level data", w.k))
        })?;
        if best.as_ref().is_none_or(|(b, _)| d < *b) {
            best = Some((d, w.name.clone()));
        }
    }
    let (d, name) = best.expect("non-empty");
    Ok(ElementCrit {
        central: central.into(),
        min_degree: d,
        attained_by: name,
        value: CritValue::from_degree(d),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CritResult {
    pub group: String,
    pub per_element: Vec<ElementCrit>,
    /// `1 + 1/(max_c min_K gr(G/K))`.
    pub value: CritValue,
    /// The value holds on each of these one-manifolds.
    pub domains: Vec<String>,
    pub scope: String,
    pub rationale: String,
}

pub fn crit_interval(spec: &GroupSpec) -> Result<CritResult> {
    if spec.crit_candidates.is_empty() {
        return Err(Error::Config(format!("{} declares no central candidates", spec.name)));
    }
    let mut per_element = Vec::new();
    for cand in &spec.crit_candidates {
        let ws = cand
            .witnesses
            .iter()
            .map(|n| spec.witness(n).map_err(Error::from))
            .collect::<Result<Vec<_>>>()?;
        let e = crit_for_element(spec, &cand.central, &ws)?;
        if e.value == CritValue::Unbounded && !spec.abelian {
            return Err(Error::Group(crate::group::GroupError::Inconsistent(format!(
                "{} is declared non-abelian but {} gives an unbounded value via {}",
                spec.name, cand.central, e.attained_by
            ))));
        }
        per_element.push(e);
    }
    let max_min = per_element.iter().map(|e| e.min_degree).max().expect("non-empty");
    let value = CritValue::from_degree(max_min);
    Ok(CritResult {
        group: spec.name.clone(),
        per_element,
        value,
        domains: vec!["[0,1]".into(), "(0,1]".into(), "S1".into()],
        scope: "over declared central candidates and witnesses".into(),
        rationale: spec.crit_rationale.clone(),
    })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AbelianBound {
    pub subgroup: String,
    pub is_abelian: bool,
    /// `gr(G / (H ∨ Z(G)))`.
    pub degree: usize,
}

pub fn abelian_stab_bound(spec: &GroupSpec, h: &SubgroupSpec) -> Result<AbelianBound> {
    let is_abelian = h
        .generators
        .iter()
        .enumerate()
        .all(|(i, x)| h.generators[i + 1..].iter().all(|y| x.commutator(y).is_identity()));
    let join = h
        .join_center
        .as_deref()
        .ok_or_else(|| Error::Config(format!("subgroup {} has no catalog join with the center", h.name)))?;
    let degree = schreier_degree(spec, spec.subgroup(join)?)?;
    Ok(AbelianBound {
        subgroup: h.name.clone(),
        is_abelian,
        degree,
    })
}

#[derive(Clone, Debug)]
pub struct NegativeControl {
    pub description: String,
    pub witness: WitnessSpec,
    pub expected_clause: String,
}

/// Deliberately corrupted copies of `w`, each expected to fail a named clause.
pub fn negative_controls(spec: &GroupSpec, w: &WitnessSpec) -> Vec<NegativeControl> {
    let mut out = Vec::new();
    let mut push = |description: &str, witness: WitnessSpec, clause: &str| {
        out.push(NegativeControl {
            description: description.into(),
            witness,
            expected_clause: clause.into(),
        })
    };
    if spec.subgroups.contains_key("Zcenter") && w.h != "Zcenter" {
        let mut x = w.clone();
        x.h = "Zcenter".into();
        x.mu = LinearFunctional::from_terms([]);
        push("H replaced by the center, mu by zero", x, "mu_central_nonzero");
    }
    let mut x = w.clone();
    x.mu = LinearFunctional::from_terms(w.mu.terms.iter().map(|t| (t.pos, 2 * t.coeff)));
    push("mu doubled", x, "mu_surjective");
    if !spec.abelian {
        let mut x = w.clone();
        x.central = spec.levels[0].generators[0].clone();
        push("central element replaced by a non-central generator", x, "central");
    }
    if let Some(first) = w.chain.first() {
        let mut x = w.clone();
        x.chain[0].lambda = LinearFunctional::from_terms(first.lambda.terms.iter().map(|t| (t.pos, -3 * t.coeff)));
        push("first chain functional tripled", x, "lambda0_surjective");
        let mut x = w.clone();
        x.chain.pop();
        if x.chain.last().map(|s| s.subgroup.as_str()).unwrap_or("whole") != w.k {
            push("last chain step dropped", x, "chain_ends_at_K");
        }
    }
    out
}

impl WitnessReport {
    pub fn failed_clause_names(&self) -> Vec<&str> {
        self.clauses.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }
}

/// Sign-normalized `mu(c)` for display.
pub fn mu_of_central(spec: &GroupSpec, w: &WitnessSpec) -> Result<BigInt> {
    Ok(w.mu.eval(spec.element(&w.central)?).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::ratio;

    fn fin(p: u64, q: u64) -> CritValue {
        CritValue::Finite(ratio::from_u64(p, q))
    }

    #[test]
    fn catalog_witnesses_pass() {
        for g in catalog::builtin().groups() {
            for w in g.witnesses.values() {
                let r = check_witness(g, w).unwrap();
                assert!(r.passed(), "{}/{}: {:?}", g.name, w.name, r.first_failure());
            }
        }
    }

    #[test]
    fn n3_kac_example_and_negative_control() {
        let n3 = catalog::builtin().group("N3").unwrap();
        let w = n3.witness("K_ac").unwrap();
        let r = verify_witness(n3, w).unwrap();
        assert_eq!(r.schreier_degree, Some(1));
        let mut bad = w.clone();
        bad.h = "Zcenter".into();
        bad.mu = LinearFunctional::from_terms([]);
        match verify_witness(n3, &bad) {
            Err(Error::Verification { clause, .. }) => assert_eq!(clause, "mu_central_nonzero"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_control_suite() {
        for g in catalog::builtin().groups() {
            for w in g.witnesses.values() {
                for nc in negative_controls(g, w) {
                    let r = check_witness(g, &nc.witness).unwrap();
                    assert!(
                        r.failed_clause_names().contains(&nc.expected_clause.as_str()),
                        "{}/{} ({}): failed {:?}",
                        g.name,
                        w.name,
                        nc.description,
                        r.failed_clause_names()
                    );
                }
            }
        }
    }

    #[test]
    fn crit_values() {
        let cat = catalog::builtin();
        assert_eq!(crit_interval(cat.group("N4").unwrap()).unwrap().value, fin(3, 2));
        assert_eq!(crit_interval(cat.group("N3").unwrap()).unwrap().value, fin(2, 1));
        assert_eq!(crit_interval(cat.group("N3xN3").unwrap()).unwrap().value, fin(2, 1));
        assert_eq!(crit_interval(cat.group("Z2").unwrap()).unwrap().value, CritValue::Unbounded);
        let n3 = cat.group("N3").unwrap();
        let ws = [n3.witness("K_ac").unwrap(), n3.witness("Zc").unwrap()];
        let e = crit_for_element(n3, "c", &ws).unwrap();
        assert_eq!((e.min_degree, e.attained_by.as_str()), (1, "K_ac"));
        // min over a superset is no larger
        let sub = crit_for_element(n3, "c", &ws[1..]).unwrap();
        assert!(sub.min_degree >= e.min_degree);
        assert_eq!(sub.value, fin(3, 2));
        assert!(matches!(crit_for_element(n3, "c", &[]), Err(Error::Config(_))));
    }

    #[test]
    fn non_abelian_values_in_range() {
        for g in catalog::builtin().groups().filter(|g| !g.abelian) {
            match crit_interval(g).unwrap().value {
                CritValue::Finite(r) => {
                    assert!(r > ratio::integer(1) && r <= ratio::integer(2), "{}: {r}", g.name)
                }
                CritValue::Unbounded => panic!("{}", g.name),
            }
        }
    }

    #[test]
    fn unbounded_in_non_abelian_is_inconsistent() {
        let mut n3 = catalog::builtin().group("N3").unwrap().clone();
        let mut w = n3.witness("K_ac").unwrap().clone();
        w.name = "bogus".into();
        w.k = "whole".into();
        w.chain.clear();
        n3.witnesses.insert("bogus".into(), w);
        n3.crit_candidates[0].witnesses = vec!["bogus".into()];
        assert!(crit_interval(&n3).is_err());
    }

    #[test]
    fn abelian_bounds_in_n3xn3() {
        let g = catalog::builtin().group("N3xN3").unwrap();
        let b = |n: &str| abelian_stab_bound(g, g.subgroup(n).unwrap()).unwrap();
        assert_eq!((b("Zcenter").is_abelian, b("Zcenter").degree), (true, 4));
        assert_eq!((b("A_ac").is_abelian, b("A_ac").degree), (true, 2));
        assert_eq!((b("whole").is_abelian, b("whole").degree), (false, 0));
        for s in g.subgroups.values() {
            if s.join_center.is_some() {
                let r = b(&s.name);
                if r.is_abelian && r.subgroup != "trivial" {
                    assert!(r.degree >= 2, "{}", s.name);
                }
            }
        }
    }
}
