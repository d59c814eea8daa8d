//! Random paths `g_n = f_{w_n} g_{n-1}` built from independent uniform ball blocks.

pub mod action;
pub mod heisenberg;
pub mod sampler;

use std::cmp::Ordering;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub use action::{CosetLengths, CosetLocator, CosetOrderAction, IdentityAction, MonotoneAction};
pub use heisenberg::HeisenbergSampler;
pub use sampler::{pad_block, BallSampler, BlockSampler};

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::growth::fit_exponent;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockKind {
    /// Uniform ball block `g_(j)`.
    Ball,
    /// Greedy most-moving-right block `F_{n_j}`.
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub index: usize,
    /// Steps `start+1 ..= start+len` belong to this block.
    pub start: usize,
    pub len: usize,
    pub kind: BlockKind,
}

/// `n_j = 2^j`, `s_0 = 0`, `s_{j+1} = s_j + n_j`; blocks until `steps` is covered.
pub fn schedule(steps: usize) -> Vec<Block> {
    let mut out = Vec::new();
    let mut s = 0;
    let mut j = 0;
    while s < steps {
        let n = 1usize << j;
        out.push(Block {
            index: j,
            start: s,
            len: n,
            kind: BlockKind::Ball,
        });
        s += n;
        j += 1;
    }
    out
}

/// Each `n_j` appears twice: `F_{n_j}` first, then `g_(j)`.
pub fn schedule_right(steps: usize) -> Vec<Block> {
    let mut out = Vec::new();
    let mut s = 0;
    let mut j = 0;
    while s < steps {
        let n = 1usize << j;
        for kind in [BlockKind::Right, BlockKind::Ball] {
            if s < steps {
                out.push(Block {
                    index: j,
                    start: s,
                    len: n,
                    kind,
                });
                s += n;
            }
        }
        j += 1;
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ProcessTrace {
    pub seed: u64,
    /// `w_1..w_N` as alphabet indices.
    pub letters: Vec<usize>,
    /// `g_0..g_N`.
    #[serde(skip)]
    pub products: Vec<GroupElement>,
    pub blocks: Vec<Block>,
    /// Coset key of `g_n K`, when lengths were attached.
    pub cosets: Option<Vec<String>>,
    /// `|g_n(I_c)|`, when lengths were attached.
    pub lengths: Option<Vec<f64>>,
}

impl ProcessTrace {
    pub fn steps(&self) -> usize {
        self.letters.len()
    }

    pub fn attach_lengths(&mut self, lengths: &CosetLengths) -> Result<()> {
        let (keys, ls): (Vec<_>, Vec<_>) = self
            .products
            .iter()
            .map(|g| lengths.length(g))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .unzip();
        self.cosets = Some(keys);
        self.lengths = Some(ls);
        Ok(())
    }
}

fn push_letters(products: &mut Vec<GroupElement>, letters: &mut Vec<usize>, sampler: &dyn BlockSampler, word: &[usize]) {
    for &k in word {
        let g = sampler.letters().elem(k).mul(products.last().expect("g_0"));
        products.push(g);
        letters.push(k);
    }
}

/// The plain process: blocks right-to-left, `g_(j)` uniform in `B_{n_j}`.
pub fn sample_path(sampler: &dyn BlockSampler, steps: usize, seed: u64) -> Result<ProcessTrace> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks = schedule(steps);
    let e = GroupElement::identity(&sampler.letters().elem(0).dims());
    let mut products = vec![e];
    let mut letters = Vec::with_capacity(steps);
    for b in &blocks {
        let (_, word) = sampler.draw_block(b.len, &mut rng)?;
        let take = b.len.min(steps - b.start);
        push_letters(&mut products, &mut letters, sampler, &word[..take]);
    }
    Ok(ProcessTrace {
        seed,
        letters,
        products,
        blocks,
        cosets: None,
        lengths: None,
    })
}

/// Greedy `u_1, u_2, ...`: `x_n = max_f f(x_{n-1})`, ties to the lowest letter index.
pub fn greedy_right<A: MonotoneAction>(action: &A, nletters: usize, x0: &A::Point, len: usize) -> Result<Vec<usize>> {
    let mut x = x0.clone();
    let mut u = Vec::with_capacity(len);
    for _ in 0..len {
        let mut best = (0, action.apply(0, &x)?);
        for k in 1..nletters {
            let y = action.apply(k, &x)?;
            if action.compare(&y, &best.1) == Ordering::Greater {
                best = (k, y);
            }
        }
        u.push(best.0);
        x = best.1;
    }
    Ok(u)
}

/// The right-moving process: `... g_(j) F_{n_j} ... g_(1) F_2 g_(0) F_1`, asserting
/// `g_n(x0) >= x0` at every step.
pub fn sample_path_right<A: MonotoneAction>(
    sampler: &dyn BlockSampler,
    action: &A,
    x0: &A::Point,
    steps: usize,
    seed: u64,
) -> Result<ProcessTrace> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks = schedule_right(steps);
    let longest = blocks.iter().map(|b| b.len).max().unwrap_or(0);
    let u = greedy_right(action, sampler.letters().len(), x0, longest)?;
    let e = GroupElement::identity(&sampler.letters().elem(0).dims());
    let mut products = vec![e];
    let mut letters = Vec::with_capacity(steps);
    let mut x = x0.clone();
    for b in &blocks {
        let word = match b.kind {
            BlockKind::Right => u[..b.len].to_vec(),
            BlockKind::Ball => sampler.draw_block(b.len, &mut rng)?.1,
        };
        let take = b.len.min(steps - b.start);
        for &k in &word[..take] {
            x = action.apply(k, &x)?;
            if action.compare(&x, x0) == Ordering::Less {
                return Err(Error::Invariant(format!(
                    "g_{}(x0) = {x:?} fell below x0 = {x0:?} (seed {seed})",
                    letters.len() + 1
                )));
            }
            push_letters(&mut products, &mut letters, sampler, &[k]);
        }
    }
    Ok(ProcessTrace {
        seed,
        letters,
        products,
        blocks,
        cosets: None,
        lengths: None,
    })
}

/// Empirical `max_g P(g_n = g)` over paths with the given seeds.
pub fn max_point_frequency(sampler: &dyn BlockSampler, n: usize, seeds: std::ops::Range<u64>, right: bool) -> Result<f64> {
    let total = (seeds.end - seeds.start) as f64;
    let hits: Vec<GroupElement> = seeds
        .into_par_iter()
        .map(|s| {
            let t = if right {
                sample_path_right(sampler, &IdentityAction, &0.0, n, s)?
            } else {
                sample_path(sampler, n, s)?
            };
            Ok(t.products[n].clone())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut counts = std::collections::HashMap::new();
    for g in hits {
        *counts.entry(g).or_insert(0usize) += 1;
    }
    Ok(counts.values().copied().max().unwrap_or(0) as f64 / total)
}

/// Frozen constants of the critical estimate, calibrated once.
#[derive(Clone, Debug, Serialize)]
pub struct CriticalConstants {
    pub d: usize,
    pub c1: f64,
    pub c2: f64,
    pub calibrated_at: usize,
    pub samples: usize,
    /// Always true: the constants are fitted, not derived.
    pub calibrated: bool,
}

/// `max(ln N, 1)^(1 - 1/d)`.
pub fn log_term(n: usize, d: usize) -> f64 {
    (n as f64).ln().max(1.0).powf(1.0 - 1.0 / d as f64)
}

fn critical_stats(sampler: &dyn BlockSampler, lengths: &CosetLengths, d: usize, n: usize, seed: u64) -> Result<(f64, f64)> {
    let mut t = sample_path(sampler, n, seed)?;
    t.attach_lengths(lengths)?;
    let ls = t.lengths.as_ref().expect("attached");
    let xi1 = ls.iter().map(|l| l.powf(1.0 / d as f64)).sum();
    Ok((xi1, ls[n]))
}

/// `C1 = 3 E[xi1] / log_term`, `C2 = 3 E[xi2] N^d` from `samples` paths at `n`.
pub fn calibrate_critical(
    sampler: &dyn BlockSampler,
    lengths: &CosetLengths,
    d: usize,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<CriticalConstants> {
    if d == 0 || samples == 0 {
        return Err(Error::Domain("calibration needs d >= 1 and at least one sample".into()));
    }
    let stats = (0..samples as u64)
        .into_par_iter()
        .map(|i| critical_stats(sampler, lengths, d, n, seed.wrapping_add(i)))
        .collect::<Result<Vec<_>>>()?;
    let m1 = stats.iter().map(|s| s.0).sum::<f64>() / samples as f64;
    let m2 = stats.iter().map(|s| s.1).sum::<f64>() / samples as f64;
    Ok(CriticalConstants {
        d,
        c1: 3.0 * m1 / log_term(n, d),
        c2: 3.0 * m2 * (n as f64).powi(d as i32),
        calibrated_at: n,
        samples,
        calibrated: true,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CriticalOutcome {
    pub n: usize,
    pub attempts: usize,
    pub seed: u64,
    pub xi1: f64,
    pub bound1: f64,
    pub xi2: f64,
    pub bound2: f64,
}

/// Sample paths until both critical bounds hold with the frozen constants.
pub fn critical_trace(
    sampler: &dyn BlockSampler,
    lengths: &CosetLengths,
    constants: &CriticalConstants,
    n: usize,
    retries: usize,
    seed: u64,
) -> Result<CriticalOutcome> {
    let d = constants.d;
    let bound1 = constants.c1 * log_term(n, d);
    let bound2 = constants.c2 / (n.max(1) as f64).powi(d as i32);
    let mut last = (f64::NAN, f64::NAN);
    for attempt in 0..retries {
        let s = seed.wrapping_add(attempt as u64);
        let (xi1, xi2) = critical_stats(sampler, lengths, d, n, s)?;
        if xi1 <= bound1 && xi2 <= bound2 {
            return Ok(CriticalOutcome {
                n,
                attempts: attempt + 1,
                seed: s,
                xi1,
                bound1,
                xi2,
                bound2,
            });
        }
        last = (xi1, xi2);
    }
    Err(Error::Statistical(format!(
        "no path of length {n} met the critical bounds in {retries} attempts \
         (last xi1 = {:.6e} vs {bound1:.6e}, xi2 = {:.6e} vs {bound2:.6e}); constants may be miscalibrated",
        last.0, last.1
    )))
}

#[derive(Clone, Debug, Serialize)]
pub struct SummabilityReport {
    pub alpha: f64,
    /// `S_N = Σ_{n<=N} l(v_n)^alpha`, per path.
    pub partial_sums: Vec<Vec<f64>>,
    /// Ensemble mean of `l(v_n)^alpha`, per `n`.
    pub mean_terms: Vec<f64>,
}

impl SummabilityReport {
    /// Log-log slope of the mean term over `window`.
    pub fn decay_exponent(&self, window: (usize, usize)) -> Result<f64> {
        // fit_exponent takes counts; rescale to integers without losing the slope
        let scale = 1e18 / self.mean_terms.iter().cloned().fold(f64::MIN_POSITIVE, f64::max);
        let counts: Vec<usize> = self.mean_terms.iter().map(|m| (m * scale).round().max(1.0) as usize).collect();
        Ok(fit_exponent(&counts, window)?.exponent)
    }
}

pub fn summability_report(traces: &[ProcessTrace], alpha: f64) -> Result<SummabilityReport> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Domain(format!("alpha = {alpha} is outside (0, 1]")));
    }
    let mut partial_sums = Vec::with_capacity(traces.len());
    let len = traces.iter().map(|t| t.steps() + 1).min().unwrap_or(0);
    let mut mean_terms = vec![0.0; len];
    for t in traces {
        let ls = t
            .lengths
            .as_ref()
            .ok_or_else(|| Error::Config(format!("trace for seed {} carries no lengths", t.seed)))?;
        let mut acc = 0.0;
        let sums = ls
            .iter()
            .map(|l| {
                acc += l.powf(alpha);
                acc
            })
            .collect();
        partial_sums.push(sums);
        for (m, l) in mean_terms.iter_mut().zip(ls) {
            *m += l.powf(alpha) / traces.len() as f64;
        }
    }
    Ok(SummabilityReport {
        alpha,
        partial_sums,
        mean_terms,
    })
}
