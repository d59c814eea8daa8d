use nilreg::canon::{length_bound_check, peel_canonical, Canon, Letter};
use nilreg::catalog;
use nilreg::wordmetric::{ball, GenSet};
use proptest::prelude::*;

const NON_ABELIAN: [&str; 5] = ["N3", "N4", "N4p", "H5", "N3xN3"];

fn base(c: &Canon) -> u64 {
    (3 * c.c_comm() as u64 + 1).max(4)
}

#[test]
fn sort_matches_peel_on_small_balls() {
    for (name, radius) in [("N3", 6), ("N4", 5), ("N4p", 5), ("H5", 4), ("N3xN3", 3)] {
        let g = catalog::builtin().group(name).unwrap();
        let canon = Canon::new(g).unwrap();
        let letters = GenSet::from_spec(g).unwrap();
        let b = ball(&letters, radius).unwrap();
        let graded: Vec<Option<Letter>> = letters
            .names()
            .iter()
            .map(|n| {
                if n == "e" {
                    return None;
                }
                let (base, inv) = n.strip_suffix("^-1").map_or((n.as_str(), false), |b| (b, true));
                Some(canon.letter_named(base, inv).unwrap())
            })
            .collect();
        for i in 0..b.len() {
            let word: Vec<Letter> = b.geodesic_word_at(i).iter().filter_map(|&k| graded[k]).collect();
            let out = canon.sort_normalize(&word, radius as u64, base(&canon), false).unwrap();
            assert_eq!(out.form, peel_canonical(g, b.element(i)).unwrap(), "{name}");
        }
    }
}

#[test]
fn level_one_bounds_double_slowly() {
    let g = catalog::builtin().group("N3").unwrap();
    let b = ball(&GenSet::from_spec(g).unwrap(), 16).unwrap();
    let r = length_bound_check(g, &b).unwrap();
    for level in 1..=2 {
        assert!(r.doubling_ratio(level) < 1.5, "level {level}: {}", r.doubling_ratio(level));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Mixed-level words at scale `n = len`, so the starting weight is at most 2.
    #[test]
    fn weights_never_increase_on_mixed_words(gi in 0usize..5, picks in prop::collection::vec(0usize..64, 1..12)) {
        let g = catalog::builtin().group(NON_ABELIAN[gi]).unwrap();
        let canon = Canon::new(g).unwrap();
        let all = Canon::all_letters(g);
        let word: Vec<Letter> = picks.iter().map(|&p| all[p % all.len()]).collect();
        let n = word.len() as u64;
        let out = canon.sort_normalize(&word, n, base(&canon), true).unwrap();
        prop_assert!(out.weights[0] <= num_rational::BigRational::from_integer(2.into()));
        for pair in out.weights.windows(2) {
            prop_assert!(pair[1] <= pair[0]);
        }
        prop_assert_eq!(&out.form, &peel_canonical(g, &canon.evaluate(&word)).unwrap());
    }
}
