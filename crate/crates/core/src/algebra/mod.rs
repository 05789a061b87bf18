//! Finite-ring arithmetic and enumeration of the finite Steinberg subgroups.

pub mod group;
pub mod matrix;
pub mod poly;
pub mod steinberg;

use thiserror::Error;

pub use group::{bfs_closure, truncation_map, ElementId, Generator, GroupTable, DEFAULT_CAP};
pub use matrix::{elementary, RingMatrix};
pub use poly::{is_prime, Monomial, Ring, TruncatedPoly};
pub use steinberg::{
    kernel_word_image, kernel_word_power, pair_group, single_group, steinberg_generators,
    verify_steinberg_relations, FamilyCount, IntMatrix, Pair, PairGroup, RelationReport,
    SteinbergGenerators,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("closure exceeded the cap of {cap} elements with {frontier} elements still on the frontier")]
    CapExceeded { cap: usize, frontier: usize },
    #[error("refusing to check relations: {0}")]
    TruncationRisk(String),
    #[error("inconsistent tables: {0}")]
    Inconsistent(String),
}
