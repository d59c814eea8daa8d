use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::element::{check_pos, GroupElement, Pos};
use super::GroupError;

/// One term of a functional: `coeff * entry(factor, row, col)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[i64; 4]", into = "[i64; 4]")]
pub struct Term {
    pub pos: Pos,
    pub coeff: i64,
}

impl From<[i64; 4]> for Term {
    fn from(q: [i64; 4]) -> Self {
        Term {
            pos: Pos::new(q[0] as usize, q[1] as usize, q[2] as usize),
            coeff: q[3],
        }
    }
}

impl From<Term> for [i64; 4] {
    fn from(t: Term) -> Self {
        [t.pos.factor as i64, t.pos.row as i64, t.pos.col as i64, t.coeff]
    }
}

/// Integer-valued linear form in the matrix entries.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinearFunctional {
    pub terms: Vec<Term>,
}

impl LinearFunctional {
    pub fn entry(pos: Pos) -> Self {
        LinearFunctional {
            terms: vec![Term { pos, coeff: 1 }],
        }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Pos, i64)>) -> Self {
        LinearFunctional {
            terms: terms.into_iter().map(|(pos, coeff)| Term { pos, coeff }).collect(),
        }
    }

    pub fn eval(&self, g: &GroupElement) -> BigInt {
        let mut acc = BigInt::zero();
        for t in &self.terms {
            if t.coeff != 0 {
                acc += g.entry(t.pos) * t.coeff;
            }
        }
        acc
    }

    pub fn validate(&self, dims: &[usize]) -> Result<(), GroupError> {
        self.terms.iter().try_for_each(|t| check_pos(dims, t.pos))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vanishes_on_identity() {
        let f = LinearFunctional::from_terms([(Pos::new(0, 0, 1), 3), (Pos::new(0, 1, 2), -2)]);
        assert!(f.eval(&GroupElement::identity(&[3])).is_zero());
    }

    #[test]
    fn json_quadruples() {
        let f = LinearFunctional::from_terms([(Pos::new(1, 0, 2), -4)]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, "[[1,0,2,-4]]");
        let back: LinearFunctional = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }
}
