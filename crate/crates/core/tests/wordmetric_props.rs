use nilreg::catalog;
use nilreg::growth::sandwich;
use nilreg::wordmetric::{ball, ball_with, schreier_ball, BallOptions, BallRecord, GenSet};
use nilreg::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The largest ball below `cap` elements.
fn capped_ball(letters: &GenSet, cap: usize) -> BallRecord {
    let opts = BallOptions {
        max_elements: Some(cap),
        workers: None,
    };
    match ball_with(letters, 64, &opts) {
        Ok(b) => b,
        Err(Error::Budget { completed_radius, .. }) => ball(letters, completed_radius).unwrap(),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn sandwich_for_every_catalog_subgroup() {
    for g in catalog::builtin().groups() {
        let letters = GenSet::from_spec(g).unwrap();
        let b = capped_ball(&letters, 150_000);
        let half = b.radius() / 2;
        for s in g.subgroups.values() {
            let sb = schreier_ball(&letters, s, half).unwrap();
            for row in sandwich(&b, &sb).unwrap() {
                assert!(row.lower && row.upper, "{}/{}: {row:?}", g.name, s.name);
            }
        }
    }
}

#[test]
fn random_geodesics_remultiply() {
    let g = catalog::builtin().group("N4").unwrap();
    let letters = GenSet::from_spec(g).unwrap();
    let b = ball(&letters, 7).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..1000 {
        let i = rng.gen_range(0..b.len());
        let w = b.geodesic_word_at(i);
        assert_eq!(&letters.evaluate(&w), b.element(i));
        assert_eq!(Some(w.len()), b.distance(b.element(i)));
    }
}

/// `c^k` with `|k| <= m^2` has length at most `6m + 2`, and a loop of length `n` encloses
/// area at most `n^2 / 16`.
#[test]
fn n3_center_counts_between_area_bounds() {
    let g = catalog::builtin().group("N3").unwrap();
    let b = ball(&GenSet::from_spec(g).unwrap(), 20).unwrap();
    let rel = b.relative_count(g.subgroup("Zcenter").unwrap());
    for n in 0..=20usize {
        let upper = 2 * (n * n / 16) + 1;
        let m = n.saturating_sub(2) / 6;
        let lower = 2 * m * m + 1;
        assert!(lower <= rel[n] && rel[n] <= upper, "n={n}: {lower} <= {} <= {upper}", rel[n]);
    }
}
