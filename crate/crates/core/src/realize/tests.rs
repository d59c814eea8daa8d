use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::catalog;
use crate::process::MonotoneAction;

fn n3() -> &'static crate::group::GroupSpec {
    catalog::builtin().group("N3").unwrap()
}

fn small() -> &'static Realization {
    static SYS: OnceLock<Realization> = OnceLock::new();
    SYS.get_or_init(|| auto_system(n3(), "K_ac", 4, 0.75, 4.0).unwrap())
}

#[test]
fn parameters_follow_the_construction() {
    let sys = small();
    let p = sys.params();
    assert!((p.eps - 0.6).abs() < 1e-12);
    assert_eq!(p.c0, 8.0);
    assert_eq!(sys.cosets(), 9);
    let bound: f64 = (0..sys.cosets()).map(|v| sys.coset_length(v)).sum();
    assert!(sys.total_length() <= bound);
    // With J = 4 max A_v the omitted tails carry roughly a third of each L(A_v).
    assert!(core_coverage(sys).unwrap() > 0.6);
    for v in 0..sys.cosets() {
        assert!(sys.scale(v) >= 1.0);
    }
}

#[test]
fn layout_is_adjacent_and_ordered() {
    let sys = small();
    let order = sys.order();
    let jm = sys.j_max();
    for w in order.windows(2) {
        let end = sys.global_x(&SysPoint { v: w[0], j: jm, u: 1.0 });
        let start = sys.global_x(&SysPoint { v: w[1], j: -jm, u: 0.0 });
        assert!((end - start).abs() < 1e-14);
    }
    // b moves cosets to the right in the order.
    let b = sys.letters().index_of("b").unwrap();
    let v = sys.identity_coset();
    let (u, l) = sys.letter_move(b, v).unwrap();
    assert_eq!(l, 0);
    let pos = |x| order.iter().position(|&y| y == x).unwrap();
    assert_eq!(pos(u), pos(v) + 1);
}

#[test]
fn one_sided_derivatives_agree() {
    let sys = small();
    for k in 0..sys.letters().len() {
        for v in 0..sys.cosets() {
            if sys.norm(v) < sys.params().radius {
                let m = endpoint_mismatch(sys, k, v).unwrap();
                assert!(m < 1e-8, "letter {k} coset {v}: {m}");
            }
        }
    }
}

#[test]
fn composition_matches_product() {
    let sys = small();
    let letters = sys.letters();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let margin = 10;
    for _ in 0..400 {
        let (k1, k2) = (rng.gen_range(1..letters.len()), rng.gen_range(1..letters.len()));
        let interior: Vec<usize> = (0..sys.cosets()).filter(|&v| sys.norm(v) + 2 <= sys.safe_radius()).collect();
        let v = interior[rng.gen_range(0..interior.len())];
        let j = rng.gen_range(-sys.j_max() + margin..=sys.j_max() - margin);
        let p = SysPoint { v, j, u: rng.gen() };
        let (q1, d1) = sys.apply_letter_strict(k1, &p).unwrap();
        let (q2, d2) = sys.apply_letter_strict(k2, &q1).unwrap();
        let g = letters.elem(k2).mul(letters.elem(k1));
        let (r, dr) = sys.apply_element(&g, &p).unwrap();
        assert_eq!((q2.v, q2.j), (r.v, r.j));
        let scale = sys.len(r.v, r.j);
        assert!(((q2.u - r.u) * scale).abs() <= 1e-8 * scale.max(1e-300), "{q2:?} {r:?}");
        assert!((q2.u - r.u).abs() < 1e-8);
        assert!(((d1 * d2 - dr) / dr).abs() < 1e-8);
    }
}

#[test]
fn derivative_tends_to_one_at_the_ends() {
    let sys = small();
    let jm = sys.j_max();
    for k in 1..sys.letters().len() {
        for v in 0..sys.cosets() {
            if sys.norm(v) >= sys.params().radius {
                continue;
            }
            for p in [SysPoint { v, j: -jm, u: 0.0 }, SysPoint { v, j: jm, u: 1.0 }] {
                let (_, d) = sys.apply_letter(k, &p).unwrap();
                assert!((d - 1.0).abs() < 0.05, "{d}");
            }
        }
    }
}

#[test]
fn central_element_shifts_by_one() {
    let sys = small();
    let v = sys.identity_coset();
    let p = SysPoint { v, j: 3, u: 0.25 };
    let (q, _) = sys.apply_element(sys.central(), &p).unwrap();
    assert_eq!((q.v, q.j), (v, 4));
    let g = derivative_growth(sys, 20, 7).unwrap();
    assert_eq!(g.sup[0], 1.0);
    assert!(g.sup[1..].iter().all(|&s| s >= 1.0));
    assert_eq!(g.lower_bound_failure(), None);
    let far = sys.j_max() as usize * 2 + 1;
    assert!(matches!(derivative_growth(sys, far, 1), Err(crate::Error::Truncation(_))));
}

#[test]
fn realized_action_is_monotone() {
    let action = RealizedAction { system: Arc::new(auto_system(n3(), "K_ac", 4, 0.75, 4.0).unwrap()) };
    let sys = &action.system;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        let v = rng.gen_range(0..sys.cosets());
        if sys.norm(v) > 2 {
            continue;
        }
        let p = SysPoint { v, j: rng.gen_range(-50..50), u: rng.gen() };
        let q = SysPoint { u: (p.u + rng.gen::<f64>() * (1.0 - p.u)).min(1.0), ..p };
        for k in 0..sys.letters().len() {
            let (fp, fq) = (action.apply(k, &p).unwrap(), action.apply(k, &q).unwrap());
            assert_ne!(action.compare(&fp, &fq), std::cmp::Ordering::Greater);
        }
    }
}

#[test]
fn smallest_system_and_precondition() {
    let s = auto_system(n3(), "K_ac", 0, 0.75, 1.0);
    // Radius 0 is too small to fit the cocycle degree.
    assert!(matches!(s, Err(crate::Error::InsufficientData(_))));
    let mut params = small().params().clone();
    params.radius = 0;
    let sys = build_system(n3(), &params).unwrap();
    assert_eq!(sys.cosets(), 1);
    let mut bad = params.clone();
    bad.j_max = 1;
    assert!(matches!(build_system(n3(), &bad), Err(crate::Error::Config(_))));
    bad = params;
    bad.alpha = 1.5;
    assert!(matches!(build_system(n3(), &bad), Err(crate::Error::Domain(_))));
}

#[test]
fn file_round_trip() {
    let sys = small();
    let file = sys.to_file(1);
    let json = serde_json::to_string(&file).unwrap();
    let back: SystemFile = serde_json::from_str(&json).unwrap();
    let rebuilt = Realization::from_file(n3(), &back).unwrap();
    assert_eq!(rebuilt.total_length(), sys.total_length());
}

#[test]
fn holder_matches_formula_shape() {
    let sys = small();
    let b = sys.letters().index_of("b").unwrap();
    let rows = holder_table(sys, b, 0.75, 3, 8).unwrap();
    assert!(!rows.is_empty());
    let (_, agreement) = formula_agreement(&rows).unwrap();
    assert!((0.25..=4.0).contains(&agreement), "{agreement}");
}
