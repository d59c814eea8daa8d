//! The flow of `V(x) = x(1-x)^2` on `[0,1]` and the Tsuboi maps built from it.
//!
//! With `s = ln(x/(1-x))` the conserved quantity `F(x) = ln(x/(1-x)) + 1/(1-x)` is
//! `s + e^s + 1`, so the time-`t` map solves `s' + e^{s'} = s + e^s + t`.

use crate::error::{Error, Result};

/// Largest admissible `|t|`.
pub const MAX_TIME: f64 = 50.0;

fn check_time(t: f64) -> Result<()> {
    if !t.is_finite() || t.abs() > MAX_TIME {
        return Err(Error::Domain(format!("flow time {t} outside [-{MAX_TIME}, {MAX_TIME}]")));
    }
    Ok(())
}

fn check_point(x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("flow point {x} outside [0,1]")));
    }
    Ok(())
}

pub fn vector_field(x: f64) -> f64 {
    x * (1.0 - x) * (1.0 - x)
}

pub fn conserved(x: f64) -> f64 {
    (x / (1.0 - x)).ln() + 1.0 / (1.0 - x)
}

fn logit(x: f64) -> f64 {
    x.ln() - (-x).ln_1p()
}

/// Solves `s + e^s = target` by safeguarded Newton from `guess`.
fn solve_logit(target: f64, guess: f64) -> Result<f64> {
    let mut hi = target;
    let mut lo = if target > 1.0 { target.ln() - 1.0 } else { target - std::f64::consts::E - 1.0 };
    let mut s = guess.clamp(lo, hi);
    for _ in 0..200 {
        let es = s.exp();
        let phi = s + es - target;
        if phi > 0.0 {
            hi = s;
        } else {
            lo = s;
        }
        let mut next = s - phi / (1.0 + es);
        let tol = 1e-15 * (1.0 + s.abs());
        if (next - s).abs() <= tol {
            return Ok(next.clamp(lo, hi));
        }
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if hi - lo <= tol {
            return Ok(next);
        }
        s = next;
    }
    Err(Error::Numerical(format!("flow inversion did not converge for target {target}")))
}

/// `(phi_t(x), phi_t'(x))` on local logit coordinates.
fn flow_pair(t: f64, x: f64) -> Result<(f64, f64)> {
    if x == 0.0 {
        return Ok((0.0, t.exp()));
    }
    if x == 1.0 {
        return Ok((1.0, 1.0));
    }
    if t == 0.0 {
        return Ok((x, 1.0));
    }
    let s = logit(x);
    let es = s.exp();
    let target = s + es + t;
    let guess = s + t / (1.0 + es);
    let s2 = solve_logit(target, guess)?;
    // x = 1/(1+e^-s), 1-x = 1/(1+e^s).
    let y = 1.0 / (1.0 + (-s2).exp());
    let (px, qx) = (1.0 / (1.0 + (-s).exp()), 1.0 / (1.0 + es));
    let qy = 1.0 / (1.0 + s2.exp());
    let d = (y / px) * (qy / qx) * (qy / qx);
    Ok((y, d))
}

/// Time-`t` map of the flow of `V`.
pub fn flow(t: f64, x: f64) -> Result<f64> {
    check_time(t)?;
    check_point(x)?;
    Ok(flow_pair(t, x)?.0)
}

/// `d/dx phi_t(x) = V(phi_t(x)) / V(x)`, with the endpoint limits `e^t` at 0 and 1 at 1.
pub fn flow_derivative(t: f64, x: f64) -> Result<f64> {
    check_time(t)?;
    check_point(x)?;
    Ok(flow_pair(t, x)?.1)
}

/// Both the value and derivative.
pub fn flow_with_derivative(t: f64, x: f64) -> Result<(f64, f64)> {
    check_time(t)?;
    check_point(x)?;
    flow_pair(t, x)
}

/// A closed interval `[left, right]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub left: f64,
    pub right: f64,
}

impl Interval {
    pub fn new(left: f64, right: f64) -> Result<Interval> {
        if !(left < right) || !left.is_finite() || !right.is_finite() {
            return Err(Error::Domain(format!("degenerate interval [{left}, {right}]")));
        }
        Ok(Interval { left, right })
    }

    pub fn len(&self) -> f64 {
        self.right - self.left
    }
}

/// Time of the Tsuboi map for length ratios `r' = |J'|/|I'|`, `r = |J|/|I|`.
pub fn tsuboi_time(ratio_prev: f64, ratio: f64) -> f64 {
    ratio_prev.ln() - ratio.ln()
}

/// Tsuboi map on the unit interval in local coordinates: `u -> (u', derivative factor of the flow)`.
/// The full derivative is `|J|/|I|` times the factor.
pub fn tsuboi_local(t: f64, u: f64) -> Result<(f64, f64)> {
    flow_with_derivative(t, u)
}

/// The diffeomorphism `I -> J` that is affine-conjugate to the time-`t` flow, with
/// `t = ln(|J'|/|I'|) - ln(|J|/|I|)`, so that its derivative is `|J'|/|I'|` at the
/// left end of `I` and `|J|/|I|` at the right end.
#[derive(Clone, Copy, Debug)]
pub struct TsuboiMap {
    pub domain: Interval,
    pub target: Interval,
    pub time: f64,
}

fn adjacent(a: &Interval, b: &Interval) -> bool {
    (a.right - b.left).abs() <= 1e-12 * (a.len() + b.len())
}

pub fn tsuboi_map(i_prev: Interval, i: Interval, j_prev: Interval, j: Interval) -> Result<TsuboiMap> {
    if !adjacent(&i_prev, &i) {
        return Err(Error::Config(format!(
            "domain intervals [{}, {}] and [{}, {}] are not adjacent",
            i_prev.left, i_prev.right, i.left, i.right
        )));
    }
    if !adjacent(&j_prev, &j) {
        return Err(Error::Config(format!(
            "target intervals [{}, {}] and [{}, {}] are not adjacent",
            j_prev.left, j_prev.right, j.left, j.right
        )));
    }
    let time = tsuboi_time(j_prev.len() / i_prev.len(), j.len() / i.len());
    check_time(time)?;
    Ok(TsuboiMap { domain: i, target: j, time })
}

impl TsuboiMap {
    fn local(&self, x: f64) -> Result<f64> {
        if x < self.domain.left || x > self.domain.right {
            return Err(Error::Domain(format!(
                "{x} outside [{}, {}]",
                self.domain.left, self.domain.right
            )));
        }
        Ok(((x - self.domain.left) / self.domain.len()).clamp(0.0, 1.0))
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let (y, _) = flow_pair(self.time, self.local(x)?)?;
        Ok(self.target.left + self.target.len() * y)
    }

    pub fn derivative(&self, x: f64) -> Result<f64> {
        let (_, d) = flow_pair(self.time, self.local(x)?)?;
        Ok(self.target.len() / self.domain.len() * d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conserved_quantity_advances_by_t() {
        for &x in &[1e-9, 0.01, 0.3, 0.5, 0.9, 0.999] {
            for &t in &[-20.0, -1.0, -1e-6, 0.7, 5.0, 30.0] {
                let y = flow(t, x).unwrap();
                if y > 1e-300 && y < 1.0 - 1e-15 {
                    let lhs = conserved(y) - conserved(x);
                    assert!((lhs - t).abs() < 1e-7 * (1.0 + t.abs()), "x={x} t={t} got {lhs}");
                }
            }
        }
    }

    #[test]
    fn derivative_is_ratio_of_field() {
        let (x, t) = (0.37, 1.3);
        let y = flow(t, x).unwrap();
        let d = flow_derivative(t, x).unwrap();
        assert!((d - vector_field(y) / vector_field(x)).abs() < 1e-12);
        let h = 1e-6;
        let fd = (flow(t, x + h).unwrap() - flow(t, x - h).unwrap()) / (2.0 * h);
        assert!((fd - d).abs() < 1e-7);
        assert!((flow_derivative(t, 0.0).unwrap() - t.exp()).abs() < 1e-12);
        assert_eq!(flow_derivative(t, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn guards() {
        assert!(matches!(flow(51.0, 0.5), Err(Error::Domain(_))));
        assert!(matches!(flow(1.0, 1.5), Err(Error::Domain(_))));
        let a = Interval::new(0.0, 1.0).unwrap();
        let b = Interval::new(1.5, 2.0).unwrap();
        assert!(matches!(tsuboi_map(a, b, a, b), Err(Error::Config(_))));
    }
}
