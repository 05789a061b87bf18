//! Totally geodesic subspaces, fixed sets of isometry groups and nearest
//! point projections onto them.

use nalgebra::{DMatrix, DVector};

use crate::linalg;

use super::isometry::{minkowski_gram, Isometry};
use super::model::{Model, ModelPoint};
use super::GeometryError;

#[derive(Clone, Debug, PartialEq)]
enum Shape {
    /// `base + span(directions)`, orthonormal directions.
    Affine { base: DVector<f64>, directions: DMatrix<f64> },
    /// The sheet intersected with the linear span `w`; `gram_inv` inverts
    /// the Minkowski Gram matrix `w^T J w`.
    Linear { w: DMatrix<f64>, gram_inv: DMatrix<f64> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicSubspace {
    model: Model,
    shape: Shape,
    witness: ModelPoint,
}

impl GeodesicSubspace {
    /// The whole space.
    pub fn full(model: Model) -> Self {
        let n = model.ambient_dim();
        let shape = match model {
            Model::Euclidean { .. } => Shape::Affine {
                base: DVector::zeros(n),
                directions: DMatrix::identity(n, n),
            },
            Model::Hyperboloid { .. } => Shape::Linear {
                w: DMatrix::identity(n, n),
                gram_inv: minkowski_gram(n),
            },
        };
        Self {
            model,
            shape,
            witness: model.origin(),
        }
    }

    /// Euclidean affine subspace through `base` spanned by `directions`
    /// (any spanning set; it is orthonormalized).
    pub fn affine(base: DVector<f64>, directions: &DMatrix<f64>) -> Result<Self, GeometryError> {
        let model = Model::euclidean(base.len());
        if directions.nrows() != base.len() {
            return Err(GeometryError::Parameter("direction vectors have the wrong length".into()));
        }
        let svd = linalg::svd_real(directions);
        let smax = svd.s.first().copied().unwrap_or(0.0);
        let rank = svd.s.iter().take_while(|&&s| s > 1e-12 * smax.max(1.0)).count();
        let directions = svd.u.columns(0, rank).into_owned();
        let witness = model.point(base.clone())?;
        Ok(Self {
            model,
            shape: Shape::Affine { base, directions },
            witness,
        })
    }

    /// Intersection of the sheet with the linear span of the columns of `w`.
    pub fn linear(model: Model, w: &DMatrix<f64>) -> Result<Self, GeometryError> {
        if model.is_flat() {
            return Err(GeometryError::Parameter("linear sections need a hyperboloid model".into()));
        }
        if w.nrows() != model.ambient_dim() {
            return Err(GeometryError::Parameter("spanning vectors have the wrong length".into()));
        }
        let svd = linalg::svd_real(w);
        let smax = svd.s.first().copied().unwrap_or(0.0);
        let rank = svd.s.iter().take_while(|&&s| s > 1e-12 * smax.max(1.0)).count();
        Self::from_orthonormal_span(model, svd.u.columns(0, rank).into_owned())
    }

    fn from_orthonormal_span(model: Model, w: DMatrix<f64>) -> Result<Self, GeometryError> {
        let n = model.ambient_dim();
        let gram = w.transpose() * minkowski_gram(n) * &w;
        let (vals, vecs) = linalg::symmetric_eigen(&gram);
        if vals.is_empty() || vals[0] >= -1e-12 {
            return Err(GeometryError::EmptySet(
                "the fixed linear subspace contains no timelike vector, so it misses the hyperboloid".into(),
            ));
        }
        let witness = model
            .normalize(&(&w * vecs.column(0)))
            .ok_or_else(|| GeometryError::EmptySet("no timelike witness".into()))?;
        let gram_inv = gram
            .try_inverse()
            .ok_or_else(|| GeometryError::EmptySet("degenerate Minkowski form on the fixed subspace".into()))?;
        Ok(Self {
            model,
            shape: Shape::Linear { w, gram_inv },
            witness,
        })
    }

    pub fn model(&self) -> Model {
        self.model
    }

    /// Intrinsic dimension.
    pub fn dim(&self) -> usize {
        match &self.shape {
            Shape::Affine { directions, .. } => directions.ncols(),
            Shape::Linear { w, .. } => w.ncols() - 1,
        }
    }

    /// A point of the subspace.
    pub fn witness(&self) -> &ModelPoint {
        &self.witness
    }

    /// Nearest point of the subspace.
    pub fn project(&self, x: &ModelPoint) -> Result<ModelPoint, GeometryError> {
        self.model.same(x.model)?;
        match &self.shape {
            Shape::Affine { base, directions } => {
                let rel = &x.coords - base;
                let coords = base + directions * (directions.transpose() * rel);
                Ok(ModelPoint {
                    model: self.model,
                    coords,
                })
            }
            Shape::Linear { .. } => {
                let w = self.minkowski_projection(&x.coords);
                self.model.normalize(&w).ok_or_else(|| {
                    GeometryError::ProjectionUndefined("Minkowski projection is not timelike".into())
                })
            }
        }
    }

    fn minkowski_projection(&self, v: &DVector<f64>) -> DVector<f64> {
        match &self.shape {
            Shape::Affine { directions, .. } => directions * (directions.transpose() * v),
            Shape::Linear { w, gram_inv } => {
                let mut jv = v.clone();
                jv[0] = -jv[0];
                w * (gram_inv * (w.transpose() * jv))
            }
        }
    }

    /// Orthogonal projection of a tangent vector at a point of the subspace
    /// onto the subspace's tangent space there.
    pub fn project_tangent(&self, v: &DVector<f64>) -> DVector<f64> {
        self.minkowski_projection(v)
    }

    /// `d(x, project(x))`.
    pub fn distance(&self, x: &ModelPoint) -> Result<f64, GeometryError> {
        let p = self.project(x)?;
        super::model::dist(x, &p)
    }

    /// Base point and orthonormal directions of a Euclidean affine subspace.
    pub(crate) fn affine_parts(&self) -> Option<(&DVector<f64>, &DMatrix<f64>)> {
        match &self.shape {
            Shape::Affine { base, directions } => Some((base, directions)),
            Shape::Linear { .. } => None,
        }
    }

    pub fn contains(&self, x: &ModelPoint, tol: f64) -> bool {
        self.distance(x).is_ok_and(|d| d <= tol)
    }
}

/// Common fixed set of a list of isometries, with the null-space threshold
/// `kernel_tol` relative to the size of the stacked system.
pub fn fixed_subspace_with(model: Model, action: &[Isometry], kernel_tol: f64) -> Result<GeodesicSubspace, GeometryError> {
    for g in action {
        model.same(g.model())?;
    }
    if action.is_empty() {
        return Ok(GeodesicSubspace::full(model));
    }
    let n = model.ambient_dim();
    let mut a = DMatrix::zeros(n * action.len(), n);
    let mut rhs = DVector::zeros(n * action.len());
    for (i, g) in action.iter().enumerate() {
        a.view_mut((i * n, 0), (n, n)).copy_from(&(g.linear() - DMatrix::identity(n, n)));
        rhs.rows_mut(i * n, n).copy_from(&(-g.translation()));
    }
    let tol = kernel_tol * (1.0 + a.amax());
    let kernel = linalg::null_space(&a, tol);
    match model {
        Model::Euclidean { .. } => {
            let base = linalg::lstsq(&a, &rhs, kernel_tol);
            let residual = (&a * &base - &rhs).norm();
            if residual > 1e-9 * (1.0 + rhs.norm()) {
                return Err(GeometryError::EmptySet(format!(
                    "no common fixed point (least-squares residual {residual:e})"
                )));
            }
            let witness = model.point(base.clone())?;
            Ok(GeodesicSubspace {
                model,
                shape: Shape::Affine {
                    base,
                    directions: kernel,
                },
                witness,
            })
        }
        Model::Hyperboloid { .. } => GeodesicSubspace::from_orthonormal_span(model, kernel),
    }
}

pub fn fixed_subspace(model: Model, action: &[Isometry]) -> Result<GeodesicSubspace, GeometryError> {
    fixed_subspace_with(model, action, crate::tolerance::Tolerances::DEFAULT.kernel)
}
