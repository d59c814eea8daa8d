use nilreg::catalog;
use nilreg::group::{GroupElement, GroupSpec};
use nilreg::wordmetric::{ball, GenSet};
use num_bigint::BigInt;
use proptest::prelude::*;

fn groups() -> Vec<&'static GroupSpec> {
    catalog::builtin().groups().collect()
}

fn product(g: &GroupSpec, word: &[usize]) -> GroupElement {
    let letters = &g.alphabet;
    word.iter()
        .fold(g.identity(), |acc, &k| acc.mul(&letters[k % letters.len()].1))
}

fn word() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..64, 0..20)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn associativity_and_inverses(gi in 0usize..16, a in word(), b in word(), c in word()) {
        let gs = groups();
        let g = gs[gi % gs.len()];
        let (x, y, z) = (product(g, &a), product(g, &b), product(g, &c));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert!(x.mul(&x.inverse()).is_identity());
        prop_assert!(x.inverse().mul(&x).is_identity());
        prop_assert_eq!(x.mul(&y).inverse(), y.inverse().mul(&x.inverse()));
        prop_assert!(g.in_group(&x.mul(&y)));
    }

    #[test]
    fn projection_is_additive_on_each_level(gi in 0usize..16, a in word(), b in word()) {
        let gs = groups();
        let g = gs[gi % gs.len()];
        let (x, y) = (product(g, &a), product(g, &b));
        // Push x and y into G_j by commutating with letters j-1 times.
        let mut xs = x.clone();
        let mut ys = y.clone();
        for j in 1..=g.class() {
            if j > 1 {
                let l = &g.alphabet[(j + a.len()) % g.alphabet.len()].1;
                xs = xs.commutator(l);
                ys = ys.commutator(&g.alphabet[(j + b.len()) % g.alphabet.len()].1);
            }
            prop_assert!(g.in_level(j, &xs) && g.in_level(j, &ys));
            let px = g.project(j, &xs).unwrap();
            let py = g.project(j, &ys).unwrap();
            let pxy = g.project(j, &xs.mul(&ys)).unwrap();
            let sum: Vec<BigInt> = px.iter().zip(&py).map(|(p, q)| p + q).collect();
            prop_assert_eq!(pxy, sum);
        }
    }
}

#[test]
fn commutators_of_small_elements_lie_in_level_two() {
    for g in groups() {
        let b = ball(&GenSet::from_spec(g).unwrap(), 3).unwrap();
        let elems: Vec<_> = b.iter().map(|(e, _)| e.clone()).collect();
        for x in elems.iter().step_by(7) {
            for y in elems.iter().step_by(11) {
                let c = x.commutator(y);
                assert!(g.in_level(2, &c), "{}: [{x}, {y}] = {c} not in G_2", g.name);
            }
        }
    }
}

#[test]
fn letters_of_level_j_project_to_standard_basis() {
    for g in groups() {
        for (j, level) in g.levels.iter().enumerate() {
            for (i, f) in level.generator_elements.iter().enumerate() {
                let p = g.project(j + 1, f).unwrap();
                let expect: Vec<BigInt> = (0..level.rank).map(|k| BigInt::from((k == i) as i32)).collect();
                assert_eq!(p, expect, "{} f_{},{}", g.name, i + 1, j + 1);
            }
        }
    }
}
