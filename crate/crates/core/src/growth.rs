//! Growth degrees from ranks, and least-squares exponent fits of enumerated counts.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{lattice_rank, GroupSpec, SubgroupSpec};
use crate::wordmetric::{BallRecord, SchreierBall};

/// `D_G = Σ_j j d_j`.
pub fn bass_guivarch(spec: &GroupSpec) -> usize {
    spec.levels.iter().enumerate().map(|(j, l)| (j + 1) * l.rank).sum()
}

/// Ranks `d_j^{H;G}` of `phi_j(H_j)`, one per level.
pub fn relative_ranks(spec: &GroupSpec, sub: &SubgroupSpec) -> Result<Vec<usize>> {
    let levels = sub.levels.as_ref().ok_or_else(|| {
        Error::Config(format!("subgroup {} has no per-level generator lists", sub.name))
    })?;
    if levels.len() != spec.class() {
        return Err(Error::Config(format!(
            "subgroup {} lists {} levels, group {} has class {}",
            sub.name,
            levels.len(),
            spec.name,
            spec.class()
        )));
    }
    levels
        .iter()
        .enumerate()
        .map(|(j, gens)| {
            let vs = gens
                .iter()
                .map(|h| spec.project(j + 1, h))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            Ok(lattice_rank(&vs))
        })
        .collect()
}

/// `D_{H;G} = Σ_j j d_j^{H;G}`.
pub fn relative_degree(spec: &GroupSpec, sub: &SubgroupSpec) -> Result<usize> {
    Ok(relative_ranks(spec, sub)?
        .iter()
        .enumerate()
        .map(|(j, r)| (j + 1) * r)
        .sum())
}

/// Growth degree of the Schreier graph of `G/H`: `D_G - D_{H;G}`.
pub fn schreier_degree(spec: &GroupSpec, sub: &SubgroupSpec) -> Result<usize> {
    let dg = bass_guivarch(spec);
    let dh = relative_degree(spec, sub)?;
    dg.checked_sub(dh).ok_or_else(|| {
        Error::Invariant(format!(
            "relative degree {dh} of {} exceeds D_G = {dg}; the group data is inconsistent",
            sub.name
        ))
    })
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Fit {
    pub exponent: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
    pub window: (usize, usize),
}

/// Default window `[N/3, N]`, never starting below 1.
pub fn default_window(radius: usize) -> (usize, usize) {
    ((radius / 3).max(1), radius)
}

/// Least-squares slope of `ln counts[n]` against `ln n` over the window.
pub fn fit_exponent(counts: &[usize], window: (usize, usize)) -> Result<Fit> {
    let (lo, hi) = (window.0.max(1), window.1);
    if hi >= counts.len() {
        return Err(Error::Domain(format!(
            "window end {hi} beyond the count table (length {})",
            counts.len()
        )));
    }
    if hi < lo || hi - lo + 1 < 3 {
        return Err(Error::InsufficientData(format!("window [{lo}, {hi}] has fewer than 3 points")));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (n, &c) in counts.iter().enumerate().take(hi + 1).skip(lo) {
        if c == 0 {
            return Err(Error::Domain(format!("count at n = {n} is zero")));
        }
        xs.push((n as f64).ln());
        ys.push((c as f64).ln());
    }
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    Ok(Fit {
        exponent: slope,
        intercept,
        residual: (rss / k).sqrt(),
        window: (lo, hi),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub quantity: String,
    pub degree: usize,
    pub fit: Fit,
    pub tolerance: f64,
    pub verdict: Verdict,
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Match,
    Mismatch,
}

pub fn report(quantity: &str, degree: usize, counts: &[usize], window: (usize, usize), tolerance: f64) -> Result<GrowthReport> {
    let fit = fit_exponent(counts, window)?;
    let verdict = if (fit.exponent - degree as f64).abs() <= tolerance {
        Verdict::Match
    } else {
        Verdict::Mismatch
    };
    Ok(GrowthReport {
        quantity: quantity.into(),
        degree,
        fit,
        tolerance,
        verdict,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RankCrosscheck {
    pub level: usize,
    pub catalog_rank: usize,
    pub enumerated_rank: usize,
    pub agree: bool,
}

/// Compare catalog `H_j` ranks with ranks of `phi_j` over all enumerated members of `B ∩ H ∩ G_j`.
/// Discrepancies are reported, never corrected.
pub fn crosscheck_ranks(spec: &GroupSpec, sub: &SubgroupSpec, ball: &BallRecord) -> Result<Vec<RankCrosscheck>> {
    let ranks = relative_ranks(spec, sub)?;
    let members: Vec<_> = ball.iter().map(|(g, _)| g).filter(|g| sub.is_member(g)).collect();
    let mut out = Vec::new();
    for (j, &catalog_rank) in ranks.iter().enumerate() {
        let vs: Vec<Vec<BigInt>> = members
            .iter()
            .filter(|g| spec.in_level(j + 1, g))
            .map(|g| spec.project(j + 1, g).expect("member of level"))
            .collect();
        let enumerated_rank = lattice_rank(&vs);
        out.push(RankCrosscheck {
            level: j + 1,
            catalog_rank,
            enumerated_rank,
            agree: catalog_rank == enumerated_rank,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichRow {
    pub n: usize,
    pub ball_n: usize,
    pub ball_2n: usize,
    pub schreier_n: usize,
    pub relative_n: usize,
    pub relative_2n: usize,
    /// `#B_2n >= #S_n * #(B_n ∩ H)`.
    pub lower: bool,
    /// `#B_n <= #S_n * #(B_2n ∩ H)`.
    pub upper: bool,
}

/// The two counting inequalities relating ball, Schreier ball and relative counts, for
/// every `n` with `2n` inside the enumerated ball and `n` inside the Schreier ball.
pub fn sandwich(ball: &BallRecord, schreier: &SchreierBall) -> Result<Vec<SandwichRow>> {
    let rel = ball.relative_count(schreier.subgroup());
    let top = (ball.radius() / 2).min(schreier.radius());
    if ball.letters().fingerprint() != schreier.letters().fingerprint() {
        return Err(Error::Config("ball and Schreier ball use different letter sets".into()));
    }
    Ok((0..=top)
        .map(|n| {
            let s = schreier.counts()[n] as u128;
            SandwichRow {
                n,
                ball_n: ball.count(n),
                ball_2n: ball.count(2 * n),
                schreier_n: schreier.counts()[n],
                relative_n: rel[n],
                relative_2n: rel[2 * n],
                lower: ball.count(2 * n) as u128 >= s * rel[n] as u128,
                upper: ball.count(n) as u128 <= s * rel[2 * n] as u128,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::wordmetric::{ball, schreier_ball, GenSet};

    #[test]
    fn closed_form_degrees() {
        let cat = catalog::builtin();
        for d in 1..=4 {
            assert_eq!(bass_guivarch(cat.group(&format!("Z{d}")).unwrap()), d);
        }
        let n3 = cat.group("N3").unwrap();
        assert_eq!(bass_guivarch(n3), 4);
        assert_eq!(bass_guivarch(cat.group("N4").unwrap()), 10);
        assert_eq!(relative_ranks(n3, n3.subgroup("Zcenter").unwrap()).unwrap(), vec![0, 1]);
        assert_eq!(relative_degree(n3, n3.subgroup("Zcenter").unwrap()).unwrap(), 2);
        assert_eq!(relative_degree(n3, n3.subgroup("trivial").unwrap()).unwrap(), 0);
        assert_eq!(relative_degree(n3, n3.subgroup("K_ac").unwrap()).unwrap(), 3);
        assert_eq!(schreier_degree(n3, n3.subgroup("Zcenter").unwrap()).unwrap(), 2);
        assert_eq!(schreier_degree(n3, n3.subgroup("K_ac").unwrap()).unwrap(), 1);
        assert_eq!(schreier_degree(n3, n3.subgroup("whole").unwrap()).unwrap(), 0);
    }

    #[test]
    fn degree_identity_for_all_catalog_subgroups() {
        for g in catalog::builtin().groups() {
            for s in g.subgroups.values() {
                assert_eq!(
                    schreier_degree(g, s).unwrap() + relative_degree(g, s).unwrap(),
                    bass_guivarch(g),
                    "{}/{}",
                    g.name,
                    s.name
                );
            }
        }
    }

    #[test]
    fn h_j_outside_level_is_rejected() {
        let n3 = catalog::builtin().group("N3").unwrap();
        let mut s = n3.subgroup("Zcenter").unwrap().clone();
        s.levels.as_mut().unwrap()[1].push(n3.element("a").unwrap().clone());
        assert!(relative_degree(n3, &s).is_err());
    }

    #[test]
    fn synthetic_fits() {
        let sq: Vec<usize> = (0..=32).map(|n| n * n).collect();
        let f = fit_exponent(&sq, (4, 32)).unwrap();
        assert!((f.exponent - 2.0).abs() < 1e-9);
        let flat = vec![7usize; 20];
        assert!(fit_exponent(&flat, (3, 19)).unwrap().exponent.abs() < 1e-12);
        assert!(matches!(fit_exponent(&flat, (3, 4)), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn enumerated_exponents_match_formulas() {
        let n3 = catalog::builtin().group("N3").unwrap();
        let letters = GenSet::from_spec(n3).unwrap();
        let b = ball(&letters, 24).unwrap();
        let f = fit_exponent(b.counts(), (8, 24)).unwrap();
        assert!((f.exponent - 4.0).abs() <= 0.4, "{f:?}");
        let kac = schreier_ball(&letters, n3.subgroup("K_ac").unwrap(), 24).unwrap();
        let f = fit_exponent(kac.counts(), default_window(24)).unwrap();
        assert!((f.exponent - 1.0).abs() <= 0.2, "{f:?}");
        let z = schreier_ball(&letters, n3.subgroup("Zcenter").unwrap(), 24).unwrap();
        let f = fit_exponent(z.counts(), (16, 24)).unwrap();
        assert!((f.exponent - 2.0).abs() <= 0.4, "{f:?}");
    }

    #[test]
    fn crosscheck_agrees_on_catalog() {
        let n3 = catalog::builtin().group("N3").unwrap();
        let b = ball(&GenSet::from_spec(n3).unwrap(), 12).unwrap();
        for s in n3.subgroups.values() {
            for r in crosscheck_ranks(n3, s, &b).unwrap() {
                assert!(r.agree, "{}: {r:?}", s.name);
            }
        }
    }

    #[test]
    fn sandwich_holds_in_n3() {
        let n3 = catalog::builtin().group("N3").unwrap();
        let letters = GenSet::from_spec(n3).unwrap();
        let b = ball(&letters, 16).unwrap();
        for sub in ["Zcenter", "K_ac", "trivial", "whole"] {
            let s = schreier_ball(&letters, n3.subgroup(sub).unwrap(), 8).unwrap();
            let rows = sandwich(&b, &s).unwrap();
            assert_eq!(rows.len(), 9);
            assert!(rows.iter().all(|r| r.lower && r.upper), "{sub}: {rows:?}");
        }
        // trivial H: #S_n = #B_n and the relative count is 1
        let s = schreier_ball(&letters, n3.subgroup("trivial").unwrap(), 8).unwrap();
        let r = &sandwich(&b, &s).unwrap()[5];
        assert_eq!((r.schreier_n, r.relative_n), (r.ball_n, 1));
    }
}
