use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Rank of the lattice spanned by `vectors`, via fraction-free (Bareiss) elimination.
///
/// Over Z the rank of the generated sublattice equals the rank over Q, so
/// exact elimination without division remainders is enough.
pub fn lattice_rank(vectors: &[Vec<BigInt>]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let cols = first.len();
    debug_assert!(vectors.iter().all(|v| v.len() == cols));
    let mut m: Vec<Vec<BigInt>> = vectors.to_vec();
    let rows = m.len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for r in rank + 1..rows {
            let factor = m[r][c].clone();
            for k in c..cols {
                let v = (&pivot * &m[r][k] - &factor * &m[rank][k]) / &prev;
                m[r][k] = v;
            }
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

pub fn lattice_rank_i64(vectors: &[Vec<i64>]) -> usize {
    let big: Vec<Vec<BigInt>> = vectors.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
    lattice_rank(&big)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cases() {
        assert_eq!(lattice_rank_i64(&[]), 0);
        assert_eq!(lattice_rank_i64(&[vec![0]]), 0);
        assert_eq!(lattice_rank_i64(&[vec![1, 0], vec![0, 2], vec![1, 2]]), 2);
        assert_eq!(lattice_rank_i64(&[vec![2, 4], vec![3, 6]]), 1);
    }

    /// Brute force: dimension of the set of integer combinations in a small box,
    /// measured as the largest number of independent vectors found by 2x2/3x3 minors.
    fn brute_rank(vs: &[Vec<i64>]) -> usize {
        let n = vs.first().map_or(0, Vec::len);
        let mut combos = Vec::new();
        let k = vs.len();
        let mut coeffs = vec![-2i64; k];
        loop {
            let v: Vec<i64> = (0..n).map(|c| (0..k).map(|i| coeffs[i] * vs[i][c]).sum()).collect();
            if v.iter().any(|&x| x != 0) {
                combos.push(v);
            }
            let mut i = 0;
            while i < k {
                coeffs[i] += 1;
                if coeffs[i] <= 2 {
                    break;
                }
                coeffs[i] = -2;
                i += 1;
            }
            if i == k {
                break;
            }
        }
        // greedy independent subset using rational rank checks on small sets
        let mut basis: Vec<Vec<i64>> = Vec::new();
        for v in combos {
            let mut trial = basis.clone();
            trial.push(v);
            if f64_rank(&trial) == trial.len() {
                basis = trial;
            }
        }
        basis.len()
    }

    fn f64_rank(vs: &[Vec<i64>]) -> usize {
        let mut m: Vec<Vec<f64>> = vs.iter().map(|v| v.iter().map(|&x| x as f64).collect()).collect();
        let cols = m.first().map_or(0, Vec::len);
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..m.len()).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs())) else {
                break;
            };
            if m[p][c].abs() < 1e-9 {
                continue;
            }
            m.swap(r, p);
            for i in r + 1..m.len() {
                let f = m[i][c] / m[r][c];
                for k in c..cols {
                    m[i][k] -= f * m[r][k];
                }
            }
            r += 1;
        }
        r
    }

    #[test]
    fn agrees_with_box_search() {
        let cases: Vec<Vec<Vec<i64>>> = vec![
            vec![vec![2, 4], vec![3, 6]],
            vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]],
            vec![vec![0, 0, 0]],
            vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, -1]],
        ];
        for c in cases {
            assert_eq!(lattice_rank_i64(&c), brute_rank(&c), "{c:?}");
        }
    }

    proptest! {
        #[test]
        fn invariant_under_row_operations(
            vs in prop::collection::vec(prop::collection::vec(-5i64..5, 3), 1..5),
            i in 0usize..5, j in 0usize..5,
        ) {
            let r = lattice_rank_i64(&vs);
            let i = i % vs.len();
            let j = j % vs.len();
            let mut swapped = vs.clone();
            swapped.swap(i, j);
            prop_assert_eq!(lattice_rank_i64(&swapped), r);
            let mut neg = vs.clone();
            neg[i].iter_mut().for_each(|x| *x = -*x);
            prop_assert_eq!(lattice_rank_i64(&neg), r);
            if i != j {
                let mut added = vs.clone();
                for k in 0..3 {
                    added[i][k] += vs[j][k];
                }
                prop_assert_eq!(lattice_rank_i64(&added), r);
            }
            prop_assert_eq!(r, f64_rank(&vs));
        }
    }
}
