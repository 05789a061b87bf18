//! Fat-triangle machinery: the energies `f` and `h`, block descent over the
//! product of pairwise fixed sets, the good-point step and its monitors,
//! and the Euclidean checks behind the fixed-point argument.

pub mod descent;
pub mod energy;
pub mod fh;
pub mod scenario;

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::geometry::GeometryError;
use crate::repangle::RepError;

pub use descent::{
    minimize_f, minimize_f_with, tangent_fixed_angles, vertex_angle_certificate, Certificate, Recentering,
    SolveOptions, SolverResult, Status, TriangleState,
};
pub use energy::{
    diam_k, energy_f, energy_h, good_point_step, monitor_sweep, monitor_ttt, GoodPointRecord, MonitorRecord,
    TttRecord,
};
pub use fh::{barycenter_inequality_check, fh_affine_minimize, BarycenterRecord, FhAffineResult};
pub use scenario::{canonical_bytes, enumerate_group, scenario_generator, Scenario, ScenarioKind, ScenarioParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("fixed set of G_{{{pair}}} is empty: {reason}")]
    EmptyFixedSet { pair: String, reason: String },
    #[error("group generated by {what} exceeds {cap} elements; it may be infinite")]
    GroupCap { what: String, cap: usize },
    #[error("certificate unavailable: {0}")]
    CertificateUnavailable(String),
    #[error("could not certify the fixed point: largest generator displacement {displacement:e}")]
    NotCertified { displacement: f64 },
}

/// Fixed-set labels in the order `x`, `y`, `z` of a triangle.
pub const PAIR_LABELS: [&str; 3] = ["1,2", "1,3", "2,3"];

/// Indices of the two generating subgroups of each pairwise group.
pub const PAIR_INDICES: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];
