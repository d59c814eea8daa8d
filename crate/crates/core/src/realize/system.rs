//! A finite piece of the interval action: the cosets of a Schreier ball, each carrying
//! the intervals `I_{v,j}`, `|j| <= J`, laid out in the coset order.

use std::cmp::Ordering;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::cocycle::{fit_cocycle_degree, Cocycle};
use super::flow::flow_with_derivative;
use super::length::{invert_length, ln_interval_length, total_length};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec, WitnessSpec};
use crate::process::MonotoneAction;
use crate::wordmetric::{schreier_ball, GenSet, SchreierBall};

/// Build parameters; everything else is derived deterministically.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub group: String,
    pub witness: String,
    pub radius: usize,
    pub j_max: i64,
    #[serde(with = "crate::decimal::exact")]
    pub alpha: f64,
    #[serde(with = "crate::decimal::exact")]
    pub eps: f64,
    #[serde(with = "crate::decimal::exact")]
    pub c0: f64,
}

/// A point `u` of the unit-interval chart of `I_{v,j}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SysPoint {
    pub v: usize,
    pub j: i64,
    pub u: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CosetRecord {
    pub key: String,
    pub norm: usize,
    pub rank: usize,
    #[serde(with = "crate::decimal::exact")]
    pub a: f64,
    /// `L(A_v) = (C0 + |v|)^(-1/alpha)`.
    #[serde(with = "crate::decimal::exact")]
    pub length: f64,
    /// Left end of the truncated `I_v` in the layout.
    #[serde(with = "crate::decimal::exact")]
    pub start: f64,
    /// Length of the truncated `I_v`.
    #[serde(with = "crate::decimal::exact")]
    pub span: f64,
}

/// Serialized form written by the CLI.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SystemFile {
    pub params: SystemParams,
    pub cocycle_degree: usize,
    pub safe_radius: usize,
    #[serde(with = "crate::decimal::exact")]
    pub total_length: f64,
    pub cosets: Vec<CosetRecord>,
}

#[derive(Debug)]
pub struct Realization {
    params: SystemParams,
    letters: GenSet,
    cocycle: Cocycle,
    central: GroupElement,
    /// Cosets in layout order.
    order: Vec<usize>,
    rank: Vec<usize>,
    a: Vec<f64>,
    length: Vec<f64>,
    /// `offsets[v][j + J]` = position of `x_{v,j}` from the left end of `I_v`; one extra entry.
    offsets: Vec<Vec<f64>>,
    starts: Vec<f64>,
    /// `moves[k][v]` = `(f_k v, l(f_k, v))`, `None` when frozen.
    moves: Vec<Vec<Option<(usize, i64)>>>,
    identity_coset: usize,
}

pub fn epsilon_for(alpha: f64, degree: usize) -> f64 {
    0.9 / (alpha * (degree as f64 + 1.0))
}

pub fn coset_length(c0: f64, norm: usize, alpha: f64) -> f64 {
    (c0 + norm as f64).powf(-1.0 / alpha)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Domain(format!("alpha = {alpha} outside (0,1]")));
    }
    Ok(())
}

/// `A_v` per coset of the ball.
fn coset_scales(ball: &SchreierBall, alpha: f64, eps: f64, c0: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let r = ball.radius();
    let by_norm = (0..=r)
        .map(|n| {
            let l = coset_length(c0, n, alpha);
            invert_length(l, eps).map(|a| (a, l))
        })
        .collect::<Result<Vec<_>>>()?;
    let a = (0..ball.len()).map(|v| by_norm[ball.norm(v)].0).collect();
    let l = (0..ball.len()).map(|v| by_norm[ball.norm(v)].1).collect();
    Ok((a, l))
}

fn coset_key(letters: &GenSet, ball: &SchreierBall, v: usize) -> String {
    let w = ball.word(v);
    if w.is_empty() {
        "e".into()
    } else {
        w.iter().map(|&k| letters.name(k)).collect::<Vec<_>>().join(" ")
    }
}

fn compare_cosets(witness: &WitnessSpec, ball: &SchreierBall, v: usize, w: usize) -> Ordering {
    let d = ball.coset(v).rep.inverse().mul(&ball.coset(w).rep);
    for s in &witness.chain {
        let x = s.lambda.eval(&d);
        if !x.is_zero() {
            return if x.is_positive() { Ordering::Less } else { Ordering::Greater };
        }
    }
    Ordering::Equal
}

struct AutoChoice {
    witness: WitnessSpec,
    ball: Arc<SchreierBall>,
    cocycle: Cocycle,
    params: SystemParams,
    max_a: f64,
}

fn auto_choice(spec: &GroupSpec, witness: &str, radius: usize, alpha: f64) -> Result<AutoChoice> {
    check_alpha(alpha)?;
    let w = spec.witness(witness)?;
    let letters = GenSet::from_spec(spec)?;
    let ball = Arc::new(schreier_ball(&letters, spec.subgroup(&w.k)?, radius)?);
    let cocycle = Cocycle::new(spec, w, ball.clone())?;
    let degree = fit_cocycle_degree(&cocycle)?.degree;
    let eps = epsilon_for(alpha, degree);
    let mut c0 = 8.0;
    for _ in 0..40 {
        let (a, _) = coset_scales(&ball, alpha, eps, c0)?;
        if shift_violation(&cocycle, &a)?.is_none() {
            let max_a = a.iter().cloned().fold(0.0, f64::max);
            let params = SystemParams {
                group: spec.name.clone(),
                witness: witness.into(),
                radius,
                j_max: max_a.ceil() as i64,
                alpha,
                eps,
                c0,
            };
            return Ok(AutoChoice {
                witness: w.clone(),
                ball,
                cocycle,
                params,
                max_a,
            });
        }
        c0 *= 2.0;
    }
    Err(Error::Config("no C0 up to 8 * 2^40 satisfies |l| < A_v".into()))
}

/// Realization with parameters chosen as in the construction: the cocycle degree `d'` is fitted,
/// `eps = 0.9/(alpha (d'+1))`, `C0` doubles from 8 until `|l| < A_v`, and `J = ceil(j_factor max A_v)`.
pub fn auto_system(spec: &GroupSpec, witness: &str, radius: usize, alpha: f64, j_factor: f64) -> Result<Realization> {
    if j_factor < 1.0 {
        return Err(Error::Config(format!("j_factor {j_factor} < 1 leaves the cores incomplete")));
    }
    let mut c = auto_choice(spec, witness, radius, alpha)?;
    c.params.j_max = (j_factor * c.max_a).ceil() as i64;
    build_with(spec, &c.witness, c.ball, c.cocycle, c.params)
}

/// As [`auto_system`], with `J = max(min_j, ceil(max A_v))`.
pub fn auto_system_min_j(spec: &GroupSpec, witness: &str, radius: usize, alpha: f64, min_j: i64) -> Result<Realization> {
    let mut c = auto_choice(spec, witness, radius, alpha)?;
    c.params.j_max = c.params.j_max.max(min_j);
    build_with(spec, &c.witness, c.ball, c.cocycle, c.params)
}

fn shift_violation(cocycle: &Cocycle, a: &[f64]) -> Result<Option<String>> {
    let ball = cocycle.ball();
    for v in 0..ball.len() {
        for k in 0..ball.letters().len() {
            if let Some((_, l)) = cocycle.letter(k, v)? {
                if (l.abs() as f64) >= a[v] {
                    return Ok(Some(format!(
                        "|l({}, v)| = {} >= A_v = {:.3} at |v| = {}",
                        ball.letters().name(k),
                        l.abs(),
                        a[v],
                        ball.norm(v)
                    )));
                }
            }
        }
    }
    Ok(None)
}

pub fn build_system(spec: &GroupSpec, params: &SystemParams) -> Result<Realization> {
    check_alpha(params.alpha)?;
    if spec.name != params.group {
        return Err(Error::Config(format!("parameters are for {}, got {}", params.group, spec.name)));
    }
    let w = spec.witness(&params.witness)?;
    let letters = GenSet::from_spec(spec)?;
    let ball = Arc::new(schreier_ball(&letters, spec.subgroup(&w.k)?, params.radius)?);
    let cocycle = Cocycle::new(spec, w, ball.clone())?;
    build_with(spec, w, ball, cocycle, params.clone())
}

fn build_with(
    spec: &GroupSpec,
    witness: &WitnessSpec,
    ball: Arc<SchreierBall>,
    cocycle: Cocycle,
    params: SystemParams,
) -> Result<Realization> {
    let (a, length) = coset_scales(&ball, params.alpha, params.eps, params.c0)?;
    if let Some(msg) = shift_violation(&cocycle, &a)? {
        return Err(Error::Config(format!("{msg}; increase C0 (currently {})", params.c0)));
    }
    let max_a = a.iter().cloned().fold(0.0, f64::max);
    if (params.j_max as f64) < max_a {
        return Err(Error::Config(format!("J = {} is below max A_v = {max_a:.1}", params.j_max)));
    }
    let jm = params.j_max;
    let mut order: Vec<usize> = (0..ball.len()).collect();
    order.sort_by(|&v, &w| compare_cosets(witness, &ball, v, w));
    let mut rank = vec![0; ball.len()];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }
    let offsets: Vec<Vec<f64>> = (0..ball.len())
        .map(|v| {
            let mut o = Vec::with_capacity((2 * jm + 2) as usize);
            let mut s = 0.0;
            o.push(0.0);
            for j in -jm..=jm {
                s += ln_interval_length(a[v], params.eps, j).exp();
                o.push(s);
            }
            o
        })
        .collect();
    let mut starts = vec![0.0; ball.len()];
    let mut x = 0.0;
    for &v in &order {
        starts[v] = x;
        x += offsets[v][(2 * jm + 1) as usize];
    }
    let letters = ball.letters().clone();
    let moves = (0..letters.len())
        .map(|k| (0..ball.len()).map(|v| cocycle.letter(k, v)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let identity_coset = ball
        .locate(&spec.identity())
        .ok_or_else(|| Error::Invariant("identity coset missing from the Schreier ball".into()))?;
    Ok(Realization {
        params,
        letters,
        central: spec.element(&witness.central)?.clone(),
        cocycle,
        order,
        rank,
        a,
        length,
        offsets,
        starts,
        moves,
        identity_coset,
    })
}

impl Realization {
    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn letters(&self) -> &GenSet {
        &self.letters
    }

    pub fn ball(&self) -> &SchreierBall {
        self.cocycle.ball()
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    pub fn central(&self) -> &GroupElement {
        &self.central
    }

    pub fn cosets(&self) -> usize {
        self.a.len()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn norm(&self, v: usize) -> usize {
        self.ball().norm(v)
    }

    pub fn scale(&self, v: usize) -> f64 {
        self.a[v]
    }

    /// `L(A_v)`.
    pub fn coset_length(&self, v: usize) -> f64 {
        self.length[v]
    }

    pub fn identity_coset(&self) -> usize {
        self.identity_coset
    }

    /// Cosets whose whole letter neighbourhood is realized.
    pub fn safe_radius(&self) -> usize {
        self.params.radius.saturating_sub(1)
    }

    pub fn j_max(&self) -> i64 {
        self.params.j_max
    }

    /// `(f_k v, l(f_k, v))` or `None` when the edge leaves the ball.
    pub fn letter_move(&self, k: usize, v: usize) -> Option<(usize, i64)> {
        self.moves[k][v]
    }

    pub fn ln_len(&self, v: usize, j: i64) -> f64 {
        ln_interval_length(self.a[v], self.params.eps, j)
    }

    pub fn len(&self, v: usize, j: i64) -> f64 {
        self.ln_len(v, j).exp()
    }

    /// Position of the point inside the truncated `I_v`.
    pub fn local_x(&self, p: &SysPoint) -> f64 {
        let o = &self.offsets[p.v];
        let i = (p.j + self.params.j_max) as usize;
        o[i] + p.u * (o[i + 1] - o[i])
    }

    pub fn global_x(&self, p: &SysPoint) -> f64 {
        self.starts[p.v] + self.local_x(p)
    }

    /// Truncated length of `I_v`.
    pub fn span(&self, v: usize) -> f64 {
        self.offsets[v][(2 * self.params.j_max + 1) as usize]
    }

    pub fn total_length(&self) -> f64 {
        (0..self.cosets()).map(|v| self.span(v)).sum()
    }

    fn in_range(&self, j: i64) -> bool {
        j.abs() <= self.params.j_max
    }

    /// Tsuboi map `I_{v,j} -> I_{w,j+l}` in local charts; returns the image and the derivative.
    fn shift(&self, p: &SysPoint, w: usize, l: i64) -> Result<(SysPoint, f64)> {
        let j2 = p.j + l;
        let ln_ratio = self.ln_len(w, j2) - self.ln_len(p.v, p.j);
        let ln_ratio_prev = self.ln_len(w, j2 - 1) - self.ln_len(p.v, p.j - 1);
        let (u, fac) = flow_with_derivative(ln_ratio_prev - ln_ratio, p.u)?;
        let q = if u >= 1.0 && j2 < self.params.j_max {
            SysPoint { v: w, j: j2 + 1, u: 0.0 }
        } else {
            SysPoint { v: w, j: j2, u }
        };
        Ok((q, ln_ratio.exp() * fac))
    }

    fn check_point(&self, p: &SysPoint) -> Result<()> {
        if p.v >= self.cosets() || !self.in_range(p.j) || !(0.0..=1.0).contains(&p.u) {
            return Err(Error::Domain(format!("point {p:?} is not in the layout")));
        }
        Ok(())
    }

    /// Letter `k` at `p` with the frozen-boundary convention: identity wherever the image
    /// leaves the truncation.
    pub fn apply_letter(&self, k: usize, p: &SysPoint) -> Result<(SysPoint, f64)> {
        self.check_point(p)?;
        match self.moves[k][p.v] {
            Some((w, l)) if self.in_range(p.j + l) => self.shift(p, w, l),
            _ => Ok((*p, 1.0)),
        }
    }

    /// Letter `k` at `p`; a Truncation error wherever the frozen convention would apply.
    pub fn apply_letter_strict(&self, k: usize, p: &SysPoint) -> Result<(SysPoint, f64)> {
        self.check_point(p)?;
        match self.moves[k][p.v] {
            Some((w, l)) if self.in_range(p.j + l) => self.shift(p, w, l),
            _ => Err(Error::Truncation(format!(
                "letter {} at coset |v| = {}, j = {} leaves the truncation",
                self.letters.name(k),
                self.norm(p.v),
                p.j
            ))),
        }
    }

    /// Any group element through the cocycle; strict.
    pub fn apply_element(&self, g: &GroupElement, p: &SysPoint) -> Result<(SysPoint, f64)> {
        self.check_point(p)?;
        let (w, l) = self.cocycle.value(g, p.v)?;
        if !self.in_range(p.j + l) {
            return Err(Error::Truncation(format!("index {} beyond J = {}", p.j + l, self.params.j_max)));
        }
        self.shift(p, w, l)
    }

    /// A word in application order (first letter acts first); strict.
    pub fn apply_word(&self, word: &[usize], p: &SysPoint) -> Result<(SysPoint, f64)> {
        let mut q = *p;
        let mut d = 1.0;
        for &k in word {
            let (r, dk) = self.apply_letter_strict(k, &q)?;
            q = r;
            d *= dk;
        }
        Ok((q, d))
    }

    pub fn compare(&self, x: &SysPoint, y: &SysPoint) -> Ordering {
        self.rank[x.v]
            .cmp(&self.rank[y.v])
            .then(x.j.cmp(&y.j))
            .then(x.u.total_cmp(&y.u))
    }

    pub fn to_file(&self, cocycle_degree: usize) -> SystemFile {
        let ball = self.ball();
        SystemFile {
            params: self.params.clone(),
            cocycle_degree,
            safe_radius: self.safe_radius(),
            total_length: self.total_length(),
            cosets: self
                .order
                .iter()
                .map(|&v| CosetRecord {
                    key: coset_key(&self.letters, ball, v),
                    norm: ball.norm(v),
                    rank: self.rank[v],
                    a: self.a[v],
                    length: self.length[v],
                    start: self.starts[v],
                    span: self.span(v),
                })
                .collect(),
        }
    }

    pub fn coset_key(&self, v: usize) -> String {
        coset_key(&self.letters, self.ball(), v)
    }

    /// Rebuilds from a file and checks that the recorded scales are reproduced.
    pub fn from_file(spec: &GroupSpec, file: &SystemFile) -> Result<Realization> {
        let sys = build_system(spec, &file.params)?;
        if file.cosets.len() != sys.cosets() {
            return Err(Error::Invariant(format!(
                "file has {} cosets, rebuild has {}",
                file.cosets.len(),
                sys.cosets()
            )));
        }
        for (rec, &v) in file.cosets.iter().zip(&sys.order) {
            if rec.norm != sys.norm(v) || ((rec.a - sys.a[v]) / sys.a[v]).abs() > 1e-9 {
                return Err(Error::Invariant(format!("coset {} does not match the rebuild", rec.key)));
            }
        }
        Ok(sys)
    }
}

/// Checks that the truncated cores are complete: `total_length(A_v)` against `L(A_v)`.
pub fn core_coverage(sys: &Realization) -> Result<f64> {
    let mut worst: f64 = 1.0;
    for v in 0..sys.cosets() {
        let full = total_length(sys.scale(v), sys.params().eps)?;
        worst = worst.min(sys.span(v) / full);
    }
    Ok(worst)
}

/// The realized letters as a monotone action; leaving the truncation is an error.
#[derive(Clone, Debug)]
pub struct RealizedAction {
    pub system: Arc<Realization>,
}

impl MonotoneAction for RealizedAction {
    type Point = SysPoint;

    fn apply(&self, letter: usize, x: &SysPoint) -> Result<SysPoint> {
        Ok(self.system.apply_letter_strict(letter, x)?.0)
    }

    fn compare(&self, x: &SysPoint, y: &SysPoint) -> Ordering {
        self.system.compare(x, y)
    }
}
