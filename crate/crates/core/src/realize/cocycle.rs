//! The translation cocycle `l(g, v) = pi(h_{gv}^-1 g h_v)` of `G` acting on `G/K x Z`.

use std::sync::Arc;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec, LinearFunctional, SubgroupSpec, WitnessSpec};
use crate::wordmetric::SchreierBall;

#[derive(Clone, Debug)]
pub struct Cocycle {
    ball: Arc<SchreierBall>,
    sub: SubgroupSpec,
    pi: LinearFunctional,
    /// `pi(c)` for the witness's central element.
    pub central_value: i64,
}

fn to_i64(x: num_bigint::BigInt, what: &str) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::Domain(format!("{what} does not fit in 64 bits")))
}

impl Cocycle {
    /// Uses the witness quotient `mu: K -> Z` as `pi`.
    pub fn new(spec: &GroupSpec, witness: &WitnessSpec, ball: Arc<SchreierBall>) -> Result<Cocycle> {
        let sub = spec.subgroup(&witness.k)?.clone();
        if ball.subgroup().name != sub.name {
            return Err(Error::Config(format!(
                "Schreier ball is for {}, witness needs {}",
                ball.subgroup().name,
                sub.name
            )));
        }
        let c = spec.element(&witness.central)?;
        let central_value = to_i64(witness.mu.eval(c), "pi(c)")?;
        if central_value == 0 {
            return Err(Error::Config(format!("pi vanishes on {}", witness.central)));
        }
        Ok(Cocycle {
            ball,
            sub,
            pi: witness.mu.clone(),
            central_value,
        })
    }

    pub fn ball(&self) -> &SchreierBall {
        &self.ball
    }

    fn value_at(&self, g: &GroupElement, v: usize, u: usize) -> Result<i64> {
        let k = self.ball.coset(u).rep.inverse().mul(g).mul(&self.ball.coset(v).rep);
        if !self.sub.is_member(&k) {
            return Err(Error::Invariant(format!(
                "h_u^-1 g h_v = {k} is not in {}; coset table is corrupt",
                self.sub.name
            )));
        }
        to_i64(self.pi.eval(&k), "cocycle value")
    }

    /// `(gv, l(g, v))`; a Truncation error when `gv` leaves the ball.
    pub fn value(&self, g: &GroupElement, v: usize) -> Result<(usize, i64)> {
        let gh = g.mul(&self.ball.coset(v).rep);
        let u = self.ball.locate(&gh).ok_or_else(|| {
            Error::Truncation(format!("coset of {gh} lies outside the Schreier ball of radius {}", self.ball.radius()))
        })?;
        Ok((u, self.value_at(g, v, u)?))
    }

    /// For a letter, using the precomputed Schreier edges; `None` when the edge leaves the ball.
    pub fn letter(&self, k: usize, v: usize) -> Result<Option<(usize, i64)>> {
        match self.ball.step(v, k) {
            None => Ok(None),
            Some(u) => Ok(Some((u, self.value_at(self.ball.letters().elem(k), v, u)?))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CocycleDegree {
    /// `max |l(f, v)|` over letters `f` and `|v| <= r`, for `r = 0..=R-1`.
    pub maxima: Vec<i64>,
    pub slope: f64,
    pub degree: usize,
}

/// Fits the polynomial growth degree of the cocycle on the letters over the ball.
pub fn fit_cocycle_degree(cocycle: &Cocycle) -> Result<CocycleDegree> {
    let ball = cocycle.ball();
    if ball.radius() < 3 {
        return Err(Error::InsufficientData(format!(
            "cocycle degree needs a Schreier radius of at least 3, got {}",
            ball.radius()
        )));
    }
    let r_max = ball.radius() - 1;
    let mut by_norm = vec![0i64; r_max + 1];
    for v in 0..ball.len() {
        let n = ball.norm(v);
        if n > r_max {
            continue;
        }
        for k in 0..ball.letters().len() {
            if let Some((_, l)) = cocycle.letter(k, v)? {
                by_norm[n] = by_norm[n].max(l.abs());
            }
        }
    }
    let mut maxima = by_norm.clone();
    for r in 1..maxima.len() {
        maxima[r] = maxima[r].max(maxima[r - 1]);
    }
    let lo = (r_max / 3).max(1);
    let pts: Vec<(f64, f64)> = (lo..=r_max)
        .filter(|&r| maxima[r] > 0)
        .map(|r| ((r as f64).ln(), (maxima[r] as f64).ln()))
        .collect();
    let slope = if maxima.iter().all(|&m| m == 0) {
        0.0
    } else if pts.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "cocycle degree needs a Schreier radius of at least 3, got {}",
            ball.radius()
        )));
    } else {
        let n = pts.len() as f64;
        let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    };
    Ok(CocycleDegree {
        maxima,
        slope,
        degree: slope.round().max(0.0) as usize,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::wordmetric::{schreier_ball, GenSet};

    fn n3_cocycle(r: usize) -> Cocycle {
        let n3 = catalog::builtin().group("N3").unwrap();
        let w = n3.witness("K_ac").unwrap();
        let letters = GenSet::from_spec(n3).unwrap();
        let ball = schreier_ball(&letters, n3.subgroup(&w.k).unwrap(), r).unwrap();
        Cocycle::new(n3, w, Arc::new(ball)).unwrap()
    }

    #[test]
    fn heisenberg_cocycle_is_linear() {
        let c = n3_cocycle(12);
        let fit = fit_cocycle_degree(&c).unwrap();
        assert_eq!(fit.degree, 1, "{fit:?}");
        assert_eq!(fit.maxima[5], 5);
        assert_eq!(c.central_value, 1);
    }

    #[test]
    fn cocycle_identity() {
        // l(gh, v) = l(g, hv) + l(h, v)
        let c = n3_cocycle(6);
        let n3 = catalog::builtin().group("N3").unwrap();
        let (a, b) = (n3.element("a").unwrap(), n3.element("b").unwrap());
        let g = a.mul(&b.inverse());
        let h = b.mul(a).mul(a);
        for v in 0..c.ball().len() {
            if c.ball().norm(v) > 2 {
                continue;
            }
            let (hv, lh) = c.value(&h, v).unwrap();
            let (ghv, lg) = c.value(&g, hv).unwrap();
            let (ghv2, lgh) = c.value(&g.mul(&h), v).unwrap();
            assert_eq!(ghv, ghv2);
            assert_eq!(lgh, lg + lh);
        }
    }
}
