//! Unitary representations of enumerated groups and angles between their
//! invariant subspaces.

pub mod angles;
pub mod fh;
pub mod heisenberg;
pub mod representation;
pub mod subspace;

use thiserror::Error;

use crate::algebra::AlgebraError;

pub use angles::{
    averaging_projector, invariant_subspace, irrep_angle, steinberg_pair_angle, subgroup_angle, PairAngle,
};
pub use fh::{fh_inequality_check, fh_worst_slack, FhRecord, FhWorst};
pub use heisenberg::{heisenberg_group, heisenberg_irreps, HeisenbergFamily};
pub use representation::{regular_representation, CMatrix, RepKind, Representation};
pub use subspace::{principal_angle, AngleMethod, AngleReport, SubspaceBasis, INTERSECTION_TOL};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RepError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("scope error: {0}")]
    Scope(String),
    #[error("closure exceeded the cap of {cap} elements ({frontier} still on the frontier); {hint}")]
    CapExceeded { cap: usize, frontier: usize, hint: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
