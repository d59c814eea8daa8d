use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::GroupError;

/// Position of a strictly upper-triangular entry: (factor, row, col), zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[usize; 3]", into = "[usize; 3]")]
pub struct Pos {
    pub factor: usize,
    pub row: usize,
    pub col: usize,
}

impl From<[usize; 3]> for Pos {
    fn from(a: [usize; 3]) -> Self {
        Pos::new(a[0], a[1], a[2])
    }
}

impl From<Pos> for [usize; 3] {
    fn from(p: Pos) -> Self {
        [p.factor, p.row, p.col]
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{}[{},{}]", self.factor, self.row, self.col)
    }
}

impl Pos {
    pub fn new(factor: usize, row: usize, col: usize) -> Self {
        Pos { factor, row, col }
    }
}

/// Unitriangular matrix stored as its strictly upper entries, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct UniMat {
    dim: usize,
    upper: Vec<BigInt>,
}

#[inline]
fn offset(dim: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < dim);
    i * dim - i * (i + 1) / 2 + (j - i - 1)
}

impl UniMat {
    pub fn identity(dim: usize) -> Self {
        let n = dim * dim.saturating_sub(1) / 2;
        UniMat {
            dim,
            upper: vec![BigInt::zero(); n],
        }
    }

    /// Build from a full square matrix; rejects anything that is not unitriangular.
    pub fn from_rows(rows: &[Vec<BigInt>]) -> Result<Self, GroupError> {
        let dim = rows.len();
        let mut m = UniMat::identity(dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(GroupError::NotUnitriangular(format!(
                    "row {i} has {} entries, expected {dim}",
                    row.len()
                )));
            }
            for (j, v) in row.iter().enumerate() {
                if i == j && !v.is_one() {
                    return Err(GroupError::NotUnitriangular(format!("diagonal entry ({i},{i}) = {v}")));
                }
                if i > j && !v.is_zero() {
                    return Err(GroupError::NotUnitriangular(format!("entry ({i},{j}) = {v} below diagonal")));
                }
                if i < j {
                    m.upper[offset(dim, i, j)] = v.clone();
                }
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.upper[offset(self.dim, i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        let k = offset(self.dim, i, j);
        self.upper[k] = v;
    }

    pub fn is_identity(&self) -> bool {
        self.upper.iter().all(Zero::is_zero)
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        let n = self.dim;
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match i.cmp(&j) {
                        std::cmp::Ordering::Less => self.get(i, j).clone(),
                        std::cmp::Ordering::Equal => BigInt::one(),
                        std::cmp::Ordering::Greater => BigInt::zero(),
                    })
                    .collect()
            })
            .collect()
    }

    pub fn mul(&self, other: &UniMat) -> UniMat {
        let n = self.dim;
        let mut out = UniMat::identity(n);
        for i in 0..n {
            for k in i + 1..n {
                let mut acc = self.get(i, k) + other.get(i, k);
                for j in i + 1..k {
                    let a = self.get(i, j);
                    if a.is_zero() {
                        continue;
                    }
                    let b = other.get(j, k);
                    if b.is_zero() {
                        continue;
                    }
                    acc += a * b;
                }
                out.upper[offset(n, i, k)] = acc;
            }
        }
        out
    }

    pub fn inverse(&self) -> UniMat {
        let n = self.dim;
        let mut out = UniMat::identity(n);
        for gap in 1..n {
            for i in 0..n - gap {
                let k = i + gap;
                let mut acc = -self.get(i, k);
                for j in i + 1..k {
                    let a = self.get(i, j);
                    if a.is_zero() {
                        continue;
                    }
                    acc -= a * out.get(j, k);
                }
                out.upper[offset(n, i, k)] = acc;
            }
        }
        out
    }
}

/// An element of a direct product of unitriangular integer groups.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GroupElement {
    factors: Vec<UniMat>,
}

impl GroupElement {
    pub fn identity(dims: &[usize]) -> Self {
        GroupElement {
            factors: dims.iter().map(|&d| UniMat::identity(d)).collect(),
        }
    }

    pub fn from_factors(factors: Vec<UniMat>) -> Self {
        GroupElement { factors }
    }

    /// Build from nested integer arrays, one square matrix per factor.
    pub fn from_matrices(mats: &[Vec<Vec<i64>>]) -> Result<Self, GroupError> {
        let factors = mats
            .iter()
            .map(|m| {
                let rows: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
                UniMat::from_rows(&rows)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GroupElement { factors })
    }

    /// Elementary matrix: identity plus `v` at one upper position.
    pub fn elementary(dims: &[usize], pos: Pos, v: i64) -> Result<Self, GroupError> {
        let mut g = GroupElement::identity(dims);
        check_pos(dims, pos)?;
        g.factors[pos.factor].set(pos.row, pos.col, BigInt::from(v));
        Ok(g)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(UniMat::dim).collect()
    }

    pub fn factors(&self) -> &[UniMat] {
        &self.factors
    }

    pub fn entry(&self, pos: Pos) -> &BigInt {
        self.factors[pos.factor].get(pos.row, pos.col)
    }

    pub fn is_identity(&self) -> bool {
        self.factors.iter().all(UniMat::is_identity)
    }

    fn check_same_shape(&self, other: &GroupElement) -> Result<(), GroupError> {
        if self.factors.len() != other.factors.len()
            || self.factors.iter().zip(&other.factors).any(|(a, b)| a.dim != b.dim)
        {
            return Err(GroupError::DimensionMismatch {
                left: self.dims(),
                right: other.dims(),
            });
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_same_shape(other)?;
        Ok(self.mul(other))
    }

    /// Product `self * other`; shapes must match (checked in debug builds).
    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        debug_assert_eq!(self.dims(), other.dims());
        GroupElement {
            factors: self.factors.iter().zip(&other.factors).map(|(a, b)| a.mul(b)).collect(),
        }
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            factors: self.factors.iter().map(UniMat::inverse).collect(),
        }
    }

    /// `[a, b] = a b a^-1 b^-1`.
    pub fn commutator(&self, other: &GroupElement) -> GroupElement {
        self.mul(other).mul(&self.inverse()).mul(&other.inverse())
    }

    pub fn try_commutator(&self, other: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_same_shape(other)?;
        Ok(self.commutator(other))
    }

    pub fn conjugate_by(&self, x: &GroupElement) -> GroupElement {
        x.mul(self).mul(&x.inverse())
    }

    pub fn pow(&self, e: i64) -> GroupElement {
        let mut base = if e < 0 { self.inverse() } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = GroupElement::identity(&self.dims());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Full matrices, for serialization.
    pub fn to_matrices(&self) -> Vec<Vec<Vec<BigInt>>> {
        self.factors.iter().map(UniMat::to_rows).collect()
    }

    /// Inverse of [`GroupElement::entries`].
    pub fn from_entries(dims: &[usize], entries: impl IntoIterator<Item = BigInt>) -> Result<Self, GroupError> {
        let mut it = entries.into_iter();
        let mut factors = Vec::with_capacity(dims.len());
        for &d in dims {
            let n = d * d.saturating_sub(1) / 2;
            let upper: Vec<BigInt> = it.by_ref().take(n).collect();
            if upper.len() != n {
                return Err(GroupError::NotUnitriangular("too few entries".into()));
            }
            factors.push(UniMat { dim: d, upper });
        }
        if it.next().is_some() {
            return Err(GroupError::NotUnitriangular("too many entries".into()));
        }
        Ok(GroupElement { factors })
    }

    /// All strictly upper entries, factor by factor; a stable key.
    pub fn entries(&self) -> impl Iterator<Item = &BigInt> {
        self.factors.iter().flat_map(|f| f.upper.iter())
    }
}

pub(crate) fn check_pos(dims: &[usize], pos: Pos) -> Result<(), GroupError> {
    match dims.get(pos.factor) {
        Some(&d) if pos.row < pos.col && pos.col < d => Ok(()),
        _ => Err(GroupError::BadPosition(pos)),
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, m) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            let mut first = true;
            for i in 0..m.dim {
                for j in i + 1..m.dim {
                    if !first {
                        write!(f, " ")?;
                    }
                    first = false;
                    write!(f, "{}", m.get(i, j))?;
                }
            }
        }
        write!(f, "]")
    }
}
