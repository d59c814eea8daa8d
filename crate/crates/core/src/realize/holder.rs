//! Grid estimates of `kappa_alpha(log Dg, I_v)` and of the distortion.

use serde::{Deserialize, Serialize};

use super::system::{Realization, SysPoint};
use crate::error::{Error, Result};

/// Minimum number of interior grid points per subinterval.
pub const MIN_NODES: usize = 8;

const LEAF: usize = 32;

/// Chebyshev-spaced interior nodes of `(0,1)`.
pub fn chebyshev_nodes(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 0.5 * (1.0 - (std::f64::consts::PI * (2 * i + 1) as f64 / (2 * n) as f64).cos()))
        .collect()
}

struct Node {
    lo: usize,
    hi: usize,
    min: f64,
    max: f64,
    /// Largest `|f_{i+1} - f_i| / (x_{i+1} - x_i)` inside the node.
    slope: f64,
    children: Option<(usize, usize)>,
}

struct Tree<'a> {
    x: &'a [f64],
    f: &'a [f64],
    alpha: f64,
    nodes: Vec<Node>,
    best: f64,
}

impl<'a> Tree<'a> {
    fn slope(&self, i: usize) -> f64 {
        (self.f[i + 1] - self.f[i]).abs() / (self.x[i + 1] - self.x[i])
    }

    fn build(&mut self, lo: usize, hi: usize) -> usize {
        let children = if hi - lo > LEAF {
            let mid = (lo + hi) / 2;
            Some((self.build(lo, mid), self.build(mid, hi)))
        } else {
            None
        };
        let (min, max, slope) = match children {
            Some((l, r)) => {
                let (a, b) = (&self.nodes[l], &self.nodes[r]);
                (a.min.min(b.min), a.max.max(b.max), a.slope.max(b.slope).max(self.slope(a.hi - 1)))
            }
            None => {
                let (mn, mx) = self.f[lo..hi]
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
                (mn, mx, (lo..hi - 1).map(|i| self.slope(i)).fold(0.0, f64::max))
            }
        };
        self.nodes.push(Node { lo, hi, min, max, slope, children });
        self.nodes.len() - 1
    }

    fn ratio(&self, i: usize, k: usize) -> f64 {
        (self.f[i] - self.f[k]).abs() / (self.x[k] - self.x[i]).abs().powf(self.alpha)
    }

    /// `|f_i - f_k| <= slope |x_i - x_k|`, so pairs in `[lo, hi)` give at most `slope width^(1-alpha)`.
    fn lipschitz_bound(&self, slope: f64, lo: usize, hi: usize) -> f64 {
        slope * (self.x[hi - 1] - self.x[lo]).powf(1.0 - self.alpha)
    }

    fn brute(&mut self, (a, b): (usize, usize), (c, d): (usize, usize)) {
        for i in a..b {
            for k in c.max(i + 1)..d {
                let r = self.ratio(i, k);
                if r > self.best {
                    self.best = r;
                }
            }
        }
    }

    fn within(&mut self, n: usize) {
        let node = &self.nodes[n];
        let (lo, hi, children, slope) = (node.lo, node.hi, node.children, node.slope);
        if node.max - node.min <= 0.0 || self.lipschitz_bound(slope, lo, hi) <= self.best {
            return;
        }
        match children {
            None => self.brute((lo, hi), (lo, hi)),
            Some((l, r)) => {
                self.cross(l, r, slope);
                self.within(l);
                self.within(r);
            }
        }
    }

    /// Pairs with one point in `p` and one in `q`, `p` entirely to the left; `slope` bounds the
    /// adjacent slopes of the enclosing node.
    fn cross(&mut self, p: usize, q: usize, slope: f64) {
        let (np, nq) = (&self.nodes[p], &self.nodes[q]);
        let gap = self.x[nq.lo] - self.x[np.hi - 1];
        let spread = (np.max - nq.min).max(nq.max - np.min);
        if spread <= 0.0
            || spread / gap.powf(self.alpha) <= self.best
            || self.lipschitz_bound(slope, np.lo, nq.hi) <= self.best
        {
            return;
        }
        let (pr, qr) = ((np.lo, np.hi), (nq.lo, nq.hi));
        match (np.children, nq.children) {
            (None, None) => self.brute(pr, qr),
            (Some((pl, pm)), cq) if cq.is_none() || pr.1 - pr.0 >= qr.1 - qr.0 => {
                self.cross(pl, q, slope);
                self.cross(pm, q, slope);
            }
            (_, Some((ql, qm))) => {
                self.cross(p, qm, slope);
                self.cross(p, ql, slope);
            }
            (_, None) => unreachable!("left node has children when the right one is a leaf"),
        }
    }
}

/// `max_{i<k} |f_i - f_k| / |x_k - x_i|^alpha` over sorted distinct abscissae, by branch and bound.
pub fn holder_sup(x: &[f64], f: &[f64], alpha: f64) -> Result<f64> {
    if x.len() != f.len() {
        return Err(Error::Domain("abscissae and values differ in length".into()));
    }
    if x.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain("grid abscissae must be strictly increasing".into()));
    }
    if x.len() < 2 {
        return Ok(0.0);
    }
    let mut t = Tree { x, f, alpha, nodes: Vec::new(), best: 0.0 };
    // Seed with pairs at dyadic index distances.
    let mut step = 1;
    while step < x.len() {
        for i in (0..x.len() - step).step_by(step.max(1)) {
            let r = t.ratio(i, i + step);
            t.best = t.best.max(r);
        }
        step *= 2;
    }
    let root = t.build(0, x.len());
    t.within(root);
    Ok(t.best)
}

/// Grid on the intervals `I_{v,j}`, `j in [lo, hi]`: every endpoint and `nodes` Chebyshev
/// points per interval.
pub fn interval_grid(v: usize, lo: i64, hi: i64, nodes: usize) -> Result<Vec<SysPoint>> {
    if nodes < MIN_NODES {
        return Err(Error::Config(format!("grid needs at least {MIN_NODES} points per subinterval")));
    }
    let cheb = chebyshev_nodes(nodes);
    let mut pts = Vec::with_capacity(((hi - lo + 1).max(0) as usize) * (nodes + 1) + 1);
    for j in lo..=hi {
        pts.push(SysPoint { v, j, u: 0.0 });
        pts.extend(cheb.iter().map(|&u| SysPoint { v, j, u }));
    }
    pts.push(SysPoint { v, j: hi, u: 1.0 });
    Ok(pts)
}

/// The indices `j` of `I_v` whose image under the letter is realized, i.e. away from the
/// frozen edge; `None` when the whole coset is frozen.
pub fn realized_range(sys: &Realization, letter: usize, v: usize) -> Option<(i64, i64)> {
    let (_, l) = sys.letter_move(letter, v)?;
    let jm = sys.j_max();
    let (lo, hi) = ((-jm).max(-jm - l), jm.min(jm - l));
    (lo <= hi).then_some((lo, hi))
}

fn log_derivatives(sys: &Realization, letter: usize, pts: &[SysPoint]) -> Result<Vec<f64>> {
    pts.iter()
        .map(|p| {
            let (_, d) = sys.apply_letter(letter, p)?;
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::Invariant(format!(
                    "derivative {d} of {} at {p:?} is not positive",
                    sys.letters().name(letter)
                )));
            }
            Ok(d.ln())
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HolderEstimate {
    pub kappa: f64,
    pub distortion: f64,
    pub points: usize,
}

/// `kappa_alpha(log Dg, I_v)` and the distortion of `g` on the realized part of `I_v`.
pub fn holder_constant(sys: &Realization, letter: usize, v: usize, alpha: f64, nodes: usize) -> Result<HolderEstimate> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Domain(format!("alpha = {alpha} outside (0,1]")));
    }
    let Some((lo, hi)) = realized_range(sys, letter, v) else {
        return Err(Error::Truncation(format!(
            "letter {} is frozen on the coset {}",
            sys.letters().name(letter),
            sys.coset_key(v)
        )));
    };
    let pts = interval_grid(v, lo, hi, nodes)?;
    let f = log_derivatives(sys, letter, &pts)?;
    let x: Vec<f64> = pts.iter().map(|p| sys.local_x(p)).collect();
    let kappa = holder_sup(&x, &f, alpha)?;
    Ok(HolderEstimate {
        kappa,
        distortion: distortion_of(&f),
        points: pts.len(),
    })
}

fn distortion_of(f: &[f64]) -> f64 {
    let (lo, hi) = f
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if f.is_empty() {
        0.0
    } else {
        hi - lo
    }
}

/// `max log Dg - min log Dg` over the grid of the intervals `I_{v,j}`, `j in js`.
pub fn distortion(sys: &Realization, letter: usize, v: usize, js: std::ops::RangeInclusive<i64>, nodes: usize) -> Result<f64> {
    let cheb = chebyshev_nodes(nodes.max(MIN_NODES));
    let mut pts = Vec::new();
    for j in js {
        pts.push(SysPoint { v, j, u: 0.0 });
        pts.extend(cheb.iter().map(|&u| SysPoint { v, j, u }));
        pts.push(SysPoint { v, j, u: 1.0 });
    }
    Ok(distortion_of(&log_derivatives(sys, letter, &pts)?))
}

/// `(|log L(A_v)/L(A_u)| + |l|/A_v) / L(A_v)^alpha` for `u = g v`.
pub fn formula_bound(sys: &Realization, letter: usize, v: usize, alpha: f64) -> Option<f64> {
    let (u, l) = sys.letter_move(letter, v)?;
    let (lv, lu) = (sys.coset_length(v), sys.coset_length(u));
    Some(((lv / lu).ln().abs() + l.abs() as f64 / sys.scale(v)) / lv.powf(alpha))
}

/// The closed-form lower bound `|log L_v - log L_u| / L_v^alpha` along a geodesic ray of cosets,
/// with the summable profile `L_v = (C0 + |v|)^-(d + delta)`.
pub fn blowup_formula(norms: impl IntoIterator<Item = usize>, c0: f64, d: usize, delta: f64, alpha: f64) -> Vec<f64> {
    let p = d as f64 + delta;
    norms
        .into_iter()
        .map(|n| {
            let (lv, lu) = ((c0 + n as f64).powf(-p), (c0 + n as f64 + 1.0).powf(-p));
            (lv / lu).ln().abs() / lv.powf(alpha)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HolderRow {
    pub coset: String,
    pub norm: usize,
    pub a: f64,
    pub kappa_alpha: f64,
    pub formula_bound: f64,
}

/// One row per coset of norm at most `max_norm` whose letter edge stays in the ball.
pub fn holder_table(sys: &Realization, letter: usize, alpha: f64, max_norm: usize, nodes: usize) -> Result<Vec<HolderRow>> {
    let mut rows = Vec::new();
    for &v in sys.order() {
        if sys.norm(v) > max_norm {
            continue;
        }
        let Some(bound) = formula_bound(sys, letter, v, alpha) else { continue };
        let est = holder_constant(sys, letter, v, alpha, nodes)?;
        rows.push(HolderRow {
            coset: sys.coset_key(v),
            norm: sys.norm(v),
            a: sys.scale(v),
            kappa_alpha: est.kappa,
            formula_bound: bound,
        });
    }
    Ok(rows)
}

/// The constant `C` fitted as the geometric mean of `kappa / bound`, and
/// `max kappa / (C max bound)`.
pub fn formula_agreement(rows: &[HolderRow]) -> Option<(f64, f64)> {
    let usable: Vec<&HolderRow> = rows.iter().filter(|r| r.formula_bound > 0.0 && r.kappa_alpha > 0.0).collect();
    if usable.is_empty() {
        return None;
    }
    let c = (usable.iter().map(|r| (r.kappa_alpha / r.formula_bound).ln()).sum::<f64>() / usable.len() as f64).exp();
    let kmax = usable.iter().map(|r| r.kappa_alpha).fold(0.0, f64::max);
    let bmax = usable.iter().map(|r| r.formula_bound).fold(0.0, f64::max);
    Some((c, kmax / (c * bmax)))
}

/// `max` over letters and cosets with `lo < |v| <= hi` of `kappa_alpha`.
pub fn shell_max(sys: &Realization, alpha: f64, lo: usize, hi: usize, nodes: usize) -> Result<f64> {
    let mut best: f64 = 0.0;
    for k in 0..sys.letters().len() {
        if k == sys.letters().identity_index() {
            continue;
        }
        for v in 0..sys.cosets() {
            let n = sys.norm(v);
            if n > lo && n <= hi && sys.letter_move(k, v).is_some() {
                best = best.max(holder_constant(sys, k, v, alpha, nodes)?.kappa);
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realize::flow::{tsuboi_map, Interval};

    fn brute(x: &[f64], f: &[f64], alpha: f64) -> f64 {
        let mut b: f64 = 0.0;
        for i in 0..x.len() {
            for k in i + 1..x.len() {
                b = b.max((f[i] - f[k]).abs() / (x[k] - x[i]).powf(alpha));
            }
        }
        b
    }

    #[test]
    fn branch_and_bound_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let n = rng.gen_range(2..600);
            let mut x: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            x.sort_by(f64::total_cmp);
            x.dedup();
            let f: Vec<f64> = x.iter().map(|&t| (7.0 * t).sin() + 0.1 * rng.gen::<f64>()).collect();
            let alpha = rng.gen_range(0.2..1.0);
            let (a, b) = (holder_sup(&x, &f, alpha).unwrap(), brute(&x, &f, alpha));
            assert!((a - b).abs() <= 1e-12 * b.max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn affine_and_tsuboi_examples() {
        let x: Vec<f64> = (0..50).map(|i| i as f64 / 49.0).collect();
        assert_eq!(holder_sup(&x, &vec![0.3; 50], 0.5).unwrap(), 0.0);
        assert_eq!(distortion_of(&vec![0.3; 50]), 0.0);
        // |J|/|I| = 2, |J'|/|I'| = 1 on I = [1, 1.5].
        let i_prev = Interval::new(0.0, 1.0).unwrap();
        let i = Interval::new(1.0, 1.5).unwrap();
        let j_prev = Interval::new(0.0, 1.0).unwrap();
        let j = Interval::new(1.0, 2.0).unwrap();
        let m = tsuboi_map(i_prev, i, j_prev, j).unwrap();
        let mut xs = vec![1.0];
        xs.extend(chebyshev_nodes(16).iter().map(|u| 1.0 + 0.5 * u));
        xs.push(1.5);
        let f: Vec<f64> = xs.iter().map(|&t| m.derivative(t).unwrap().ln()).collect();
        let alpha = 0.6;
        assert!(holder_sup(&xs, &f, alpha).unwrap() >= 2f64.ln() / 0.5f64.powf(alpha) - 1e-9);
    }

    #[test]
    fn blowup_formula_monotone_above_critical() {
        let above = blowup_formula(0..200, 8.0, 1, 0.1, 1.25);
        assert!(above.windows(2).all(|w| w[1] > w[0]));
        let below = blowup_formula(0..200, 8.0, 1, 0.1, 0.75);
        assert!(below.windows(2).all(|w| w[1] < w[0]));
    }
}
