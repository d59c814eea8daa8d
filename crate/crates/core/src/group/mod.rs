//! Exact group arithmetic, level data, subgroup predicates and lattice ranks.

mod element;
mod functional;
mod lattice;
mod spec;
mod verify;

pub use element::{GroupElement, Pos, UniMat};
pub use functional::{LinearFunctional, Term};
pub use lattice::{lattice_rank, lattice_rank_i64};
pub use spec::{
    ChainStep, Constraint, CritCandidate, GroupSpec, Level, PiSpec, SubgroupSpec, WitnessSpec,
};
pub use verify::{verify_spec, CheckOutcome, SpecReport};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error("factor dimensions differ: {left:?} vs {right:?}")]
    DimensionMismatch { left: Vec<usize>, right: Vec<usize> },
    #[error("matrix is not unitriangular: {0}")]
    NotUnitriangular(String),
    #[error("position {0} is not a strictly upper entry of this group")]
    BadPosition(Pos),
    #[error("element {element} is not in level G_{level}")]
    NotInLevel { level: usize, element: String },
    #[error("unknown {kind} '{name}'; available: {}", available.join(", "))]
    UnknownName {
        kind: &'static str,
        name: String,
        available: Vec<String>,
    },
    #[error("catalog schema error: {0}")]
    Schema(String),
    #[error("spec inconsistency: {0}")]
    Inconsistent(String),
}
