use std::sync::OnceLock;

use nilreg::catalog;
use nilreg::realize::system::SysPoint;
use nilreg::realize::{auto_system, flow, flow_derivative, tsuboi_map, Interval, Realization};
use nilreg::Error;
use proptest::prelude::*;

fn system() -> &'static Realization {
    static SYS: OnceLock<Realization> = OnceLock::new();
    SYS.get_or_init(|| auto_system(catalog::builtin().group("N3").unwrap(), "K_ac", 8, 0.75, 2.0).unwrap())
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

/// Adjacent intervals `[x0, x1], [x1, x2]` from positive lengths.
fn pair(l0: f64, l1: f64, x0: f64) -> (Interval, Interval) {
    (Interval::new(x0, x0 + l0).unwrap(), Interval::new(x0 + l0, x0 + l0 + l1).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn flow_is_a_one_parameter_group(s in -8.0f64..8.0, t in -8.0f64..8.0, x in 0.0f64..=1.0) {
        let lhs = flow(s, flow(t, x).unwrap()).unwrap();
        prop_assert!(close(lhs, flow(s + t, x).unwrap(), 1e-10), "{lhs} vs {}", flow(s + t, x).unwrap());
        prop_assert!(close(flow(-t, flow(t, x).unwrap()).unwrap(), x, 1e-10));
        let d = flow_derivative(s, flow(t, x).unwrap()).unwrap() * flow_derivative(t, x).unwrap();
        prop_assert!(close(d, flow_derivative(s + t, x).unwrap(), 1e-8));
    }

    #[test]
    fn tsuboi_maps_match_endpoints_and_compose(
        ls in prop::collection::vec(0.05f64..5.0, 6),
        x in 0.0f64..=1.0,
    ) {
        let (h0, h) = pair(ls[0], ls[1], 0.0);
        let (i0, i) = pair(ls[2], ls[3], 1.0);
        let (j0, j) = pair(ls[4], ls[5], -3.0);
        let f = tsuboi_map(h0, h, i0, i).unwrap();
        let g = tsuboi_map(i0, i, j0, j).unwrap();
        let gf = tsuboi_map(h0, h, j0, j).unwrap();
        prop_assert!(close(f.eval(h.left).unwrap(), i.left, 1e-12));
        prop_assert!(close(f.eval(h.right).unwrap(), i.right, 1e-12));
        prop_assert!(close(f.derivative(h.left).unwrap(), i0.len() / h0.len(), 1e-9));
        prop_assert!(close(f.derivative(h.right).unwrap(), i.len() / h.len(), 1e-9));
        let p = h.left + x * h.len();
        let y = g.eval(f.eval(p).unwrap().clamp(i.left, i.right)).unwrap();
        prop_assert!((y - gf.eval(p).unwrap()).abs() <= 1e-9 * j.len(), "{y} vs {}", gf.eval(p).unwrap());
    }

    /// A word applied letter by letter agrees with its product applied through the cocycle.
    #[test]
    fn evaluator_composes(word in prop::collection::vec(0usize..5, 1..6), j in -3i64..=3, u in 0.0f64..=1.0) {
        let sys = system();
        let p = SysPoint { v: sys.identity_coset(), j, u };
        let letters = sys.letters();
        let g = word.iter().fold(letters.elem(0).clone(), |acc, &k| letters.elem(k).mul(&acc));
        let by_letters = sys.apply_word(&word, &p);
        let by_element = sys.apply_element(&g, &p);
        match (by_letters, by_element) {
            (Ok((q1, d1)), Ok((q2, d2))) => {
                let tol = 1e-9 * sys.total_length();
                prop_assert!((sys.global_x(&q1) - sys.global_x(&q2)).abs() <= tol);
                prop_assert!(close(d1, d2, 1e-7), "{d1} vs {d2}");
            }
            (Err(Error::Truncation(_)), _) | (_, Err(Error::Truncation(_))) => {}
            (a, b) => prop_assert!(false, "{a:?} / {b:?}"),
        }
    }
}

#[test]
fn short_words_stay_inside_the_truncation() {
    let sys = system();
    assert!(sys.j_max() >= 3);
    let p = SysPoint { v: sys.identity_coset(), j: 0, u: 0.5 };
    for word in [vec![1, 3, 2, 4], vec![4, 4, 1, 1, 3]] {
        sys.apply_word(&word, &p).unwrap();
    }
}

#[test]
fn letters_preserve_order() {
    let sys = system();
    let v = sys.identity_coset();
    for k in 0..sys.letters().len() {
        let mut last = f64::NEG_INFINITY;
        for i in 0..=40 {
            let p = SysPoint { v, j: 0, u: i as f64 / 40.0 };
            let (q, d) = sys.apply_letter(k, &p).unwrap();
            let x = sys.global_x(&q);
            assert!(x >= last && d > 0.0, "letter {k} at u = {}", p.u);
            last = x;
        }
    }
}
