//! Orthonormal subspace bases and the angle between two subspaces taken
//! orthogonally to their intersection.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::linalg::{self, CMatrix};
use super::RepError;

/// Singular values of the cross-Gram matrix at or above `1 - INTERSECTION_TOL`
/// mark directions shared by both subspaces.
pub const INTERSECTION_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct SubspaceBasis {
    ambient_dim: usize,
    columns: CMatrix,
}

impl SubspaceBasis {
    /// Wrap columns that are already orthonormal to within `tol`.
    pub fn new(columns: CMatrix, tol: f64) -> Result<Self, RepError> {
        let defect = orthonormality_defect(&columns);
        if defect > tol {
            return Err(RepError::Input(format!(
                "basis columns are not orthonormal (defect {defect:e})"
            )));
        }
        Ok(Self {
            ambient_dim: columns.nrows(),
            columns,
        })
    }

    /// Orthonormal basis of the column span, via the SVD; singular values
    /// at or below `rank_tol` are discarded.
    pub fn span_of(vectors: &CMatrix, rank_tol: f64) -> Self {
        let n = vectors.nrows();
        if vectors.ncols() == 0 || n == 0 {
            return Self::zero(n);
        }
        let svd = linalg::svd_complex(vectors);
        let rank = svd.s.iter().take_while(|&&s| s > rank_tol).count();
        let columns = svd.u.columns(0, rank).into_owned();
        Self { ambient_dim: n, columns }
    }

    pub fn from_real(columns: &DMatrix<f64>, tol: f64) -> Result<Self, RepError> {
        Self::new(columns.map(|x| Complex64::new(x, 0.0)), tol)
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            columns: CMatrix::zeros(ambient_dim, 0),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.columns.ncols()
    }

    pub fn columns(&self) -> &CMatrix {
        &self.columns
    }

    /// Squared distance from `v` to the subspace.
    pub fn distance_sq(&self, v: &DVector<Complex64>) -> f64 {
        let coeffs = self.columns.adjoint() * v;
        (v.norm_squared() - coeffs.norm_squared()).max(0.0)
    }

    /// Orthogonal projector onto the subspace.
    pub fn projector(&self) -> CMatrix {
        &self.columns * self.columns.adjoint()
    }
}

fn orthonormality_defect(columns: &CMatrix) -> f64 {
    let k = columns.ncols();
    if k == 0 {
        return 0.0;
    }
    (columns.adjoint() * columns - CMatrix::identity(k, k)).camax()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AngleMethod {
    Coset,
    Dense,
    ExplicitIrrep,
}

impl AngleMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            AngleMethod::Coset => "coset",
            AngleMethod::Dense => "dense",
            AngleMethod::ExplicitIrrep => "explicit-irrep",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleReport {
    pub cosine: f64,
    pub angle: f64,
    pub dim_v1: usize,
    pub dim_v2: usize,
    pub dim_intersection: usize,
    /// One of the spaces is contained in the intersection, so nothing is
    /// left after deflation; the angle is reported as `pi/2` by convention.
    pub degenerate: bool,
    /// `angle - pi/3`.
    pub margin: f64,
    pub method: AngleMethod,
}

impl AngleReport {
    pub(crate) fn from_parts(
        cosine: Option<f64>,
        dims: (usize, usize, usize),
        method: AngleMethod,
    ) -> Self {
        let (dim_v1, dim_v2, dim_intersection) = dims;
        let (cosine, angle, degenerate) = match cosine {
            Some(c) => {
                let c = c.clamp(0.0, 1.0);
                (c, c.acos(), false)
            }
            None => (0.0, FRAC_PI_2, true),
        };
        Self {
            cosine,
            angle,
            dim_v1,
            dim_v2,
            dim_intersection,
            degenerate,
            margin: angle - FRAC_PI_3,
            method,
        }
    }
}

/// Angle from the singular values of a cross-Gram matrix between two
/// orthonormal bases (of dimensions `rows` and `cols`).
pub(crate) fn angle_from_singular_values(
    singular_values: &[f64],
    rows: usize,
    cols: usize,
    tol: f64,
    method: AngleMethod,
) -> AngleReport {
    let mut sv: Vec<f64> = singular_values.to_vec();
    sv.sort_by(|a, b| b.total_cmp(a));
    let shared = sv.iter().take_while(|&&s| s >= 1.0 - tol).count();
    let dims = (rows, cols, shared);
    if rows == shared || cols == shared {
        return AngleReport::from_parts(None, dims, method);
    }
    let cosine = sv.get(shared).copied().unwrap_or(0.0);
    AngleReport::from_parts(Some(cosine), dims, method)
}

/// Angle between two subspaces after removing their intersection.
///
/// The intersection is spanned by the principal vectors whose cosine is 1
/// (within `tol`); the remaining principal vectors are orthogonal to it, so
/// the largest remaining singular value of the cross-Gram matrix is the
/// cosine of the deflated angle.
pub fn principal_angle(b1: &SubspaceBasis, b2: &SubspaceBasis, tol: f64) -> Result<AngleReport, RepError> {
    principal_angle_with(b1, b2, tol, AngleMethod::Dense)
}

pub(crate) fn principal_angle_with(
    b1: &SubspaceBasis,
    b2: &SubspaceBasis,
    tol: f64,
    method: AngleMethod,
) -> Result<AngleReport, RepError> {
    if b1.ambient_dim != b2.ambient_dim {
        return Err(RepError::Input(format!(
            "ambient dimensions differ: {} vs {}",
            b1.ambient_dim, b2.ambient_dim
        )));
    }
    for b in [b1, b2] {
        let defect = orthonormality_defect(&b.columns);
        if defect > tol {
            return Err(RepError::Input(format!(
                "basis columns are not orthonormal (defect {defect:e})"
            )));
        }
    }
    let (r, c) = (b1.dim(), b2.dim());
    if r == 0 || c == 0 {
        return Ok(AngleReport::from_parts(None, (r, c, 0), method));
    }
    let cross = b1.columns.adjoint() * &b2.columns;
    let sv = linalg::singular_values_complex(&cross);
    Ok(angle_from_singular_values(&sv, r, c, tol, method))
}
