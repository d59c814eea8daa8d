//! Derivative growth of the central element on its interval `I_c`.

use serde::{Deserialize, Serialize};

use super::system::{Realization, SysPoint};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DerivativeGrowth {
    /// `sup |Dc^m|` over the grid, `m = 0..=M`.
    pub sup: Vec<f64>,
    /// `|J'_0| = |[x_0, c(x_0)]|` with `x_0 = x_{[e],0}`.
    pub fundamental: f64,
    /// `|J|`, the truncated `I_c`.
    pub span: f64,
    pub grid_points: usize,
}

impl DerivativeGrowth {
    pub fn running_max(&self, m: usize) -> f64 {
        self.sup[..=m.min(self.sup.len() - 1)].iter().cloned().fold(0.0, f64::max)
    }

    /// `max_{m <= hi} sup|Dc^m| / max_{m <= lo} sup|Dc^m|`.
    pub fn growth_ratio(&self, lo: usize, hi: usize) -> f64 {
        self.running_max(hi) / self.running_max(lo)
    }

    /// Smallest `n` with `2n <= M` for which no `m in [n, 2n]` satisfies
    /// `sup|Dc^m| >= |J'_0| / (2|J|) m`.
    pub fn lower_bound_failure(&self) -> Option<usize> {
        let m_max = self.sup.len() - 1;
        let rate = self.fundamental / (2.0 * self.span);
        (1..=m_max / 2).find(|&n| !(n..=2 * n).any(|m| self.sup[m] >= rate * m as f64))
    }
}

/// Iterates `c` on a grid of `I_c` (endpoints and midpoints of the intervals whose
/// orbits stay realized for `M` steps) and records the per-step suprema of `Dc^m`.
pub fn derivative_growth(sys: &Realization, m_max: usize, stride: usize) -> Result<DerivativeGrowth> {
    let v = sys.identity_coset();
    let c = sys.central().clone();
    let p_c = sys.cocycle().central_value;
    let jm = sys.j_max();
    let reach = p_c * m_max as i64;
    let (lo, hi) = if p_c > 0 { (-jm, jm - reach) } else { (-jm - reach, jm) };
    if lo > hi {
        return Err(Error::Truncation(format!(
            "{m_max} iterates of c shift j by {reach}, beyond the realized range |j| <= {jm}"
        )));
    }
    let mut pts = Vec::new();
    let mut j = lo;
    while j <= hi {
        pts.push(SysPoint { v, j, u: 0.0 });
        pts.push(SysPoint { v, j, u: 0.5 });
        j += stride.max(1) as i64;
    }
    let mut sup = vec![1.0; m_max + 1];
    let mut cur: Vec<(SysPoint, f64)> = pts.iter().map(|p| (*p, 1.0)).collect();
    for s in sup.iter_mut().skip(1) {
        let mut best: f64 = 0.0;
        for (p, d) in cur.iter_mut() {
            let (q, dq) = sys.apply_element(&c, p).map_err(|e| match e {
                Error::Truncation(msg) => Error::Truncation(format!("orbit of j = {} escaped: {msg}", p.j)),
                other => other,
            })?;
            *p = q;
            *d *= dq;
            best = best.max(*d);
        }
        *s = best;
    }
    let fundamental = (if p_c > 0 { 0..p_c } else { p_c..0 }).map(|j| sys.len(v, j)).sum();
    Ok(DerivativeGrowth {
        sup,
        fundamental,
        span: sys.span(v),
        grid_points: pts.len(),
    })
}
