//! The distance inequality `d0^2 < 2 (d1^2 + d2^2)` for a vector and the
//! fixed spaces of two subgroups and of the group they generate.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::algebra::ElementId;

use super::angles::invariant_subspace;
use crate::linalg::{self, CMatrix};

use super::representation::Representation;
use super::subspace::SubspaceBasis;
use super::RepError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FhRecord {
    /// Squared distance to the space fixed by the generated group.
    pub d0_sq: f64,
    pub d1_sq: f64,
    pub d2_sq: f64,
    /// `2 (d1^2 + d2^2) - d0^2`.
    pub slack: f64,
    pub holds: bool,
}

fn joint_subgroup(rep: &Representation, h1: &[ElementId], h2: &[ElementId]) -> Vec<ElementId> {
    let mut both = h1.to_vec();
    both.extend_from_slice(h2);
    rep.group().subgroup_closure(&both)
}

pub fn fh_inequality_check(
    rep: &Representation,
    h1: &[ElementId],
    h2: &[ElementId],
    v: &DVector<Complex64>,
) -> Result<FhRecord, RepError> {
    if v.len() != rep.dim() {
        return Err(RepError::Input(format!(
            "vector has length {} but the representation has dimension {}",
            v.len(),
            rep.dim()
        )));
    }
    let joint = joint_subgroup(rep, h1, h2);
    let d0_sq = invariant_subspace(rep, &joint)?.distance_sq(v);
    let d1_sq = invariant_subspace(rep, h1)?.distance_sq(v);
    let d2_sq = invariant_subspace(rep, h2)?.distance_sq(v);
    let slack = 2.0 * (d1_sq + d2_sq) - d0_sq;
    let tol = 1e-12 * (1.0 + v.norm_squared());
    Ok(FhRecord {
        d0_sq,
        d1_sq,
        d2_sq,
        slack,
        holds: d0_sq <= tol || slack > tol,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct FhWorst {
    /// Minimum of `2 (d1^2 + d2^2) - d0^2` over unit vectors orthogonal to
    /// the jointly fixed space; `None` when that complement is zero.
    pub min_slack: Option<f64>,
    pub worst_vector: Option<DVector<Complex64>>,
}

/// Worst case of the inequality over the unit sphere of the complement of
/// the jointly fixed space, from the top eigenpair of
/// `(I - P0) - 2 (I - P1) - 2 (I - P2)` restricted to that complement.
pub fn fh_worst_slack(rep: &Representation, h1: &[ElementId], h2: &[ElementId]) -> Result<FhWorst, RepError> {
    let n = rep.dim();
    let joint = joint_subgroup(rep, h1, h2);
    let id = CMatrix::identity(n, n);
    let q0 = &id - invariant_subspace(rep, &joint)?.projector();
    let q1 = &id - invariant_subspace(rep, h1)?.projector();
    let q2 = &id - invariant_subspace(rep, h2)?.projector();
    let complement = SubspaceBasis::span_of(&q0, 0.5);
    if complement.dim() == 0 {
        return Ok(FhWorst {
            min_slack: None,
            worst_vector: None,
        });
    }
    let two = Complex64::new(2.0, 0.0);
    let q = &q0 - (q1 + q2) * two;
    let b = complement.columns();
    let mut restricted = b.adjoint() * q * b;
    // symmetrize against rounding before the Hermitian solver
    restricted = (&restricted + restricted.adjoint()) * Complex64::new(0.5, 0.0);
    let (vals, vecs) = linalg::hermitian_eigen(&restricted);
    let top = vals.len() - 1;
    let lmax = vals[top];
    let w = b * vecs.column(top);
    Ok(FhWorst {
        min_slack: Some(-lmax),
        worst_vector: Some(w),
    })
}
