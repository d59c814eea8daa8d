//! Interval lengths `L_{A,eps}(j) = (A^2 + j^2)^{-(1+eps)/2}` and their totals.

use crate::error::{Error, Result};

/// Admissible range of `A` for [`invert_length`].
pub const A_MIN: f64 = 1.0;
pub const A_MAX: f64 = 1e9;

/// From this `A` on the lattice sum equals the integral up to `O(e^{-2 pi A})`.
const POISSON_FROM: f64 = 6.0;

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("eps = {eps} outside (0,1)")));
    }
    Ok(())
}

pub fn interval_length(a: f64, eps: f64, j: i64) -> f64 {
    let j = j as f64;
    (a * a + j * j).powf(-(1.0 + eps) / 2.0)
}

/// `ln L_{A,eps}(j)`, stable for large `A` and `j`.
pub fn ln_interval_length(a: f64, eps: f64, j: i64) -> f64 {
    let j = j as f64;
    -(1.0 + eps) / 2.0 * (a * a + j * j).ln()
}

/// `sum_{j > m} (A^2 + j^2)^{-p}` for `m >= 8A`, via Euler–Maclaurin applied to the
/// expansion `sum_k binom(-p,k) A^{2k} x^{-2p-2k}`.
fn tail(a: f64, p: f64, m: f64) -> f64 {
    let r = (a / m).powi(2);
    let (mut integral, mut f0, mut f1, mut f3, mut f5) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let mut coef = 1.0;
    for k in 0..60 {
        let q = 2.0 * p + 2.0 * k as f64;
        // c_k x^{-q} at x = m, scaled: c_k A^{2k} m^{-2p-2k} = coef * r^k * m^{-2p}.
        let base = coef * r.powi(k) * m.powf(-2.0 * p);
        integral += base * m / (q - 1.0);
        f0 += base;
        f1 += -q * base / m;
        f3 += -q * (q + 1.0) * (q + 2.0) * base / m.powi(3);
        f5 += -q * (q + 1.0) * (q + 2.0) * (q + 3.0) * (q + 4.0) * base / m.powi(5);
        coef *= -(p + k as f64) / (k as f64 + 1.0);
        if (coef * r.powi(k + 1)).abs() < 1e-18 {
            break;
        }
    }
    integral - f0 / 2.0 - f1 / 12.0 + f3 / 720.0 - f5 / 30240.0
}

/// `sum_{j in Z} L_{A,eps}(j)` to relative accuracy `1e-10`.
pub fn total_length(a: f64, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Domain(format!("A = {a} must be positive")));
    }
    let p = (1.0 + eps) / 2.0;
    if a >= POISSON_FROM {
        let ratio = libm::tgamma(eps / 2.0) / libm::tgamma(p);
        return Ok(a.powf(-eps) * std::f64::consts::PI.sqrt() * ratio);
    }
    let m = (8.0 * a).ceil().max(100.0) as i64;
    let mut s = interval_length(a, eps, 0);
    for j in 1..=m {
        s += 2.0 * interval_length(a, eps, j);
    }
    Ok(s + 2.0 * tail(a, p, m as f64))
}

/// The `A` with `total_length(A, eps) = target`, for `A` in `[A_MIN, A_MAX]`.
pub fn invert_length(target: f64, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    let (hi_len, lo_len) = (total_length(A_MIN, eps)?, total_length(A_MAX, eps)?);
    if !(target <= hi_len && target >= lo_len) {
        return Err(Error::Domain(format!(
            "target length {target} outside [{lo_len:.6e}, {hi_len:.6e}] reachable for A in [{A_MIN}, {A_MAX}]"
        )));
    }
    let (mut lo, mut hi) = (A_MIN.ln(), A_MAX.ln());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if total_length(mid.exp(), eps)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}
