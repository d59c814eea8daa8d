//! Monotone action oracles and coset length assignments used by the dynamical variants.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec, LinearFunctional, WitnessSpec};
use crate::growth::relative_ranks;
use crate::wordmetric::{GenSet, SchreierBall};

/// An order-preserving action of the letters on a totally ordered set.
pub trait MonotoneAction: Send + Sync {
    type Point: Clone + std::fmt::Debug + Send + Sync;

    fn apply(&self, letter: usize, x: &Self::Point) -> Result<Self::Point>;

    fn compare(&self, x: &Self::Point, y: &Self::Point) -> Ordering;
}

/// Every letter acts trivially.
#[derive(Clone, Copy, Debug, Default)]
pub struct IdentityAction;

impl MonotoneAction for IdentityAction {
    type Point = f64;

    fn apply(&self, _letter: usize, x: &f64) -> Result<f64> {
        Ok(*x)
    }

    fn compare(&self, x: &f64, y: &f64) -> Ordering {
        x.total_cmp(y)
    }
}

/// Left multiplication on `G/K`, ordered lexicographically by the chain functionals of a
/// stabilizer witness: `vK < wK` iff the first nonzero `lambda_i(h_v^-1 h_w)` is positive.
/// The order is left-invariant, so each letter acts monotonically.
#[derive(Clone, Debug)]
pub struct CosetOrderAction {
    letters: Vec<GroupElement>,
    lambdas: Vec<LinearFunctional>,
}

impl CosetOrderAction {
    pub fn new(spec: &GroupSpec, letters: &GenSet, witness: &WitnessSpec) -> Result<CosetOrderAction> {
        spec.subgroup(&witness.k)?;
        Ok(CosetOrderAction {
            letters: letters.elems().to_vec(),
            lambdas: witness.chain.iter().map(|s| s.lambda.clone()).collect(),
        })
    }
}

impl MonotoneAction for CosetOrderAction {
    type Point = GroupElement;

    fn apply(&self, letter: usize, x: &GroupElement) -> Result<GroupElement> {
        Ok(self.letters[letter].mul(x))
    }

    fn compare(&self, x: &GroupElement, y: &GroupElement) -> Ordering {
        let d = x.inverse().mul(y);
        for l in &self.lambdas {
            let v = l.eval(&d);
            if !v.is_zero() {
                return if v.is_positive() { Ordering::Less } else { Ordering::Greater };
            }
        }
        Ordering::Equal
    }
}

/// Locates the coset `gK` and its Schreier norm.
#[derive(Clone, Debug)]
pub enum CosetLocator {
    /// Lookup in an enumerated Schreier ball.
    Schreier(Arc<SchreierBall>),
    /// `K` is the full preimage of the level-two subgroup, so `G/K = Z^{d_1}` with the
    /// L1 norm of the abelianization.
    Abelian { spec: Box<GroupSpec> },
}

impl CosetLocator {
    /// Closed-form locator; requires `H_1 = 0` and `H_j` of full rank for `j >= 2`.
    pub fn abelian(spec: &GroupSpec, sub: &str) -> Result<CosetLocator> {
        let s = spec.subgroup(sub)?;
        let ranks = relative_ranks(spec, s)?;
        let full = ranks[0] == 0 && ranks.iter().zip(&spec.levels).skip(1).all(|(r, l)| *r == l.rank);
        let level2 = spec.levels[1..].iter().flat_map(|l| &l.generator_elements).all(|g| s.is_member(g));
        if !full || !level2 {
            return Err(Error::Config(format!(
                "{sub} is not the level-two subgroup of {}; use a Schreier ball",
                spec.name
            )));
        }
        for (name, f) in &spec.alphabet {
            let v = spec.project(1, f)?;
            if v.iter().map(|x| x.abs()).sum::<BigInt>() > BigInt::from(1) {
                return Err(Error::Config(format!("letter {name} is not a signed basis vector")));
            }
        }
        Ok(CosetLocator::Abelian { spec: Box::new(spec.clone()) })
    }

    /// `(key, norm)`.
    pub fn locate(&self, g: &GroupElement) -> Result<(String, usize)> {
        match self {
            CosetLocator::Schreier(s) => {
                let v = s.locate(g).ok_or_else(|| {
                    Error::Truncation(format!("coset of {g} lies outside the Schreier ball of radius {}", s.radius()))
                })?;
                Ok((v.to_string(), s.norm(v)))
            }
            CosetLocator::Abelian { spec } => {
                let v = spec.project(1, g)?;
                let norm = v
                    .iter()
                    .map(|x| x.abs().to_usize().unwrap_or(usize::MAX))
                    .fold(0usize, usize::saturating_add);
                let key = v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
                Ok((key, norm))
            }
        }
    }
}

/// `l(v) = (C0 + |v|)^(-exponent)`.
#[derive(Clone, Debug)]
pub struct CosetLengths {
    pub locator: CosetLocator,
    pub c0: f64,
    pub exponent: f64,
}

impl CosetLengths {
    pub fn length_of_norm(&self, norm: usize) -> f64 {
        (self.c0 + norm as f64).powf(-self.exponent)
    }

    /// `(coset key, length)`.
    pub fn length(&self, g: &GroupElement) -> Result<(String, f64)> {
        let (key, norm) = self.locator.locate(g)?;
        Ok((key, self.length_of_norm(norm)))
    }
}
