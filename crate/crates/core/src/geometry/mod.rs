//! Model Hadamard manifolds: Euclidean space and the hyperboloid.

pub mod centers;
pub mod comparison;
pub mod isometry;
pub mod model;
pub mod subspace;

use thiserror::Error;

pub use centers::{
    barycenter, barycenter_with, cartan_fixed_point, cartan_fixed_point_with, circumcenter, circumcenter_with, orbit,
};
pub use comparison::{cat0_defect, comparison_angle, flatness_defect, flatness_profile, unit_probe};
pub use isometry::Isometry;
pub use model::{
    angle_at, dist, exp, geodesic_point, log, midpoint, minkowski, project_to_tangent, tangent_inner, tangent_norm,
    Model, ModelPoint,
};
pub use subspace::{fixed_subspace, fixed_subspace_with, GeodesicSubspace};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("model mismatch: {0} vs {1}")]
    ModelMismatch(String, String),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("empty set: {0}")]
    EmptySet(String),
    #[error("projection undefined: {0}")]
    ProjectionUndefined(String),
    #[error("{what} did not converge after {iterations} iterations (gap {gap:e})")]
    NonConvergence {
        what: String,
        iterations: usize,
        gap: f64,
        last: Vec<f64>,
    },
    #[error("orbit exceeded the cap of {cap} points")]
    OrbitCap { cap: usize },
    #[error("numerical failure: center moved by {displacement:e} under a generator")]
    NotFixed { displacement: f64 },
    #[error("triangle inequality violated: {0}")]
    TriangleInequality(String),
}
