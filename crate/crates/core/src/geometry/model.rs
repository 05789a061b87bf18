//! Euclidean space and the hyperboloid model of hyperbolic space.
//!
//! The hyperboloid of curvature `-c^2` is the upper sheet of
//! `<x,x> = -x0^2 + x1^2 + ... + xd^2 = -1/c^2` in R^{d+1}.

use std::fmt;

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;

use super::GeometryError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Model {
    Euclidean { dim: usize },
    Hyperboloid { dim: usize, c: f64 },
}

/// Minkowski form `-a0 b0 + sum ai bi`.
pub fn minkowski(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    a.dot(b) - 2.0 * a[0] * b[0]
}

impl Model {
    pub fn euclidean(dim: usize) -> Self {
        Model::Euclidean { dim }
    }

    pub fn hyperboloid(dim: usize, c: f64) -> Result<Self, GeometryError> {
        if !(c.is_finite() && c > 0.0) {
            return Err(GeometryError::Parameter(format!("curvature scale must be positive, got {c}")));
        }
        if dim == 0 {
            return Err(GeometryError::Parameter("hyperboloid dimension must be at least 1".into()));
        }
        Ok(Model::Hyperboloid { dim, c })
    }

    /// Intrinsic dimension.
    pub fn dim(self) -> usize {
        match self {
            Model::Euclidean { dim } | Model::Hyperboloid { dim, .. } => dim,
        }
    }

    /// Length of coordinate vectors.
    pub fn ambient_dim(self) -> usize {
        match self {
            Model::Euclidean { dim } => dim,
            Model::Hyperboloid { dim, .. } => dim + 1,
        }
    }

    pub fn curvature_scale(self) -> Option<f64> {
        match self {
            Model::Euclidean { .. } => None,
            Model::Hyperboloid { c, .. } => Some(c),
        }
    }

    pub fn is_flat(self) -> bool {
        matches!(self, Model::Euclidean { .. })
    }

    /// The ambient bilinear form: dot product or Minkowski form.
    pub fn inner(self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        match self {
            Model::Euclidean { .. } => a.dot(b),
            Model::Hyperboloid { .. } => minkowski(a, b),
        }
    }

    /// Origin, or the apex `e0 / c` of the sheet.
    pub fn origin(self) -> ModelPoint {
        let mut coords = DVector::zeros(self.ambient_dim());
        if let Model::Hyperboloid { c, .. } = self {
            coords[0] = 1.0 / c;
        }
        ModelPoint { model: self, coords }
    }

    /// Validate ambient coordinates.
    pub fn point(self, coords: DVector<f64>) -> Result<ModelPoint, GeometryError> {
        if coords.len() != self.ambient_dim() {
            return Err(GeometryError::InvalidPoint(format!(
                "expected {} coordinates, got {}",
                self.ambient_dim(),
                coords.len()
            )));
        }
        if coords.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::InvalidPoint("non-finite coordinate".into()));
        }
        if let Model::Hyperboloid { c, .. } = self {
            let q = minkowski(&coords, &coords) + 1.0 / (c * c);
            let tol = 1e-10 * (1.0 + coords.norm_squared());
            if q.abs() > tol || coords[0] <= 0.0 {
                return Err(GeometryError::InvalidPoint(format!(
                    "not on the upper sheet (form defect {q:e}, x0 = {})",
                    coords[0]
                )));
            }
        }
        Ok(ModelPoint { model: self, coords })
    }

    /// Point with intrinsic coordinates `v`: `exp(origin, v)`.
    pub fn lift(self, v: &DVector<f64>) -> Result<ModelPoint, GeometryError> {
        if v.len() != self.dim() {
            return Err(GeometryError::InvalidPoint(format!(
                "expected {} intrinsic coordinates, got {}",
                self.dim(),
                v.len()
            )));
        }
        match self {
            Model::Euclidean { .. } => Ok(ModelPoint {
                model: self,
                coords: v.clone(),
            }),
            Model::Hyperboloid { .. } => {
                let o = self.origin();
                let t = DVector::from_fn(self.ambient_dim(), |i, _| if i == 0 { 0.0 } else { v[i - 1] });
                exp(&o, &t)
            }
        }
    }

    /// Rescale an ambient vector onto the upper sheet; `None` unless it is
    /// timelike.
    pub fn normalize(self, w: &DVector<f64>) -> Option<ModelPoint> {
        match self {
            Model::Euclidean { .. } => Some(ModelPoint {
                model: self,
                coords: w.clone(),
            }),
            Model::Hyperboloid { c, .. } => {
                let q = -minkowski(w, w);
                if !(q > 0.0) {
                    return None;
                }
                let s = w[0].signum() / (c * q.sqrt());
                Some(ModelPoint {
                    model: self,
                    coords: w * s,
                })
            }
        }
    }

    /// Snap a vector that is on the sheet up to rounding back onto it by
    /// recomputing the time coordinate from the spatial ones. Unlike
    /// `normalize` this stays accurate far from the origin.
    pub(crate) fn resheet(self, w: DVector<f64>) -> ModelPoint {
        match self {
            Model::Euclidean { .. } => ModelPoint { model: self, coords: w },
            Model::Hyperboloid { c, .. } => {
                let mut w = w;
                let spatial = w.rows(1, w.len() - 1).norm_squared();
                w[0] = (1.0 / (c * c) + spatial).sqrt();
                ModelPoint { model: self, coords: w }
            }
        }
    }

    /// A point drawn with intrinsic coordinates uniform in `[-radius, radius]^d`.
    pub fn random_point<R: Rng + ?Sized>(self, rng: &mut R, radius: f64) -> ModelPoint {
        let v = DVector::from_fn(self.dim(), |_, _| rng.random_range(-radius..=radius));
        self.lift(&v).expect("dimension matches")
    }

    pub(crate) fn same(self, other: Model) -> Result<(), GeometryError> {
        if self == other {
            Ok(())
        } else {
            Err(GeometryError::ModelMismatch(self.to_string(), other.to_string()))
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Euclidean { dim } => write!(f, "euclidean({dim})"),
            Model::Hyperboloid { dim, c } => write!(f, "hyperboloid({dim}, c={c})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelPoint {
    pub(crate) model: Model,
    pub(crate) coords: DVector<f64>,
}

impl ModelPoint {
    pub fn model(&self) -> Model {
        self.model
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    /// Euclidean norm of the ambient coordinates; a size for relative
    /// tolerances.
    pub fn magnitude(&self) -> f64 {
        self.coords.norm()
    }

    /// Unit-speed tangent direction drawn from a Gaussian.
    pub fn random_unit_tangent<R: Rng + ?Sized>(&self, rng: &mut R) -> DVector<f64> {
        loop {
            let g = DVector::from_fn(self.coords.len(), |_, _| rng.sample::<f64, _>(StandardNormal));
            let t = project_to_tangent(self, &g);
            let n = tangent_norm(self, &t);
            if n > 1e-8 {
                return t / n;
            }
        }
    }
}

/// Tangent inner product at `x` (positive definite in both models).
///
/// On the hyperboloid only the spatial parts are read. Splitting them along
/// and across the spatial part of `x` avoids the cancellation in
/// `u_s.v_s - u_0 v_0` far from the origin.
pub fn tangent_inner(x: &ModelPoint, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
    match x.model {
        Model::Euclidean { .. } => u.dot(v),
        Model::Hyperboloid { c, .. } => {
            let n = x.coords.len() - 1;
            let xs = x.coords.rows(1, n);
            let (us, vs) = (u.rows(1, n), v.rows(1, n));
            let r2 = xs.norm_squared();
            if r2 == 0.0 {
                return us.dot(&vs);
            }
            let (a, b) = (xs.dot(&us) / r2, xs.dot(&vs) / r2);
            let u_perp = us - xs * a;
            let v_perp = vs - xs * b;
            let x0 = x.coords[0];
            a * b * r2 / (c * c * x0 * x0) + u_perp.dot(&v_perp)
        }
    }
}

pub fn tangent_norm(x: &ModelPoint, u: &DVector<f64>) -> f64 {
    tangent_inner(x, u, u).max(0.0).sqrt()
}

/// Orthogonal projection of an ambient vector onto the tangent space at `x`.
pub fn project_to_tangent(x: &ModelPoint, v: &DVector<f64>) -> DVector<f64> {
    match x.model {
        Model::Euclidean { .. } => v.clone(),
        Model::Hyperboloid { c, .. } => v + &x.coords * (c * c * minkowski(&x.coords, v)),
    }
}

pub fn dist(x: &ModelPoint, y: &ModelPoint) -> Result<f64, GeometryError> {
    x.model.same(y.model)?;
    Ok(dist_unchecked(x, y))
}

pub(crate) fn dist_unchecked(x: &ModelPoint, y: &ModelPoint) -> f64 {
    let diff = &y.coords - &x.coords;
    match x.model {
        Model::Euclidean { .. } => diff.norm(),
        Model::Hyperboloid { c, .. } => {
            // chord length: |y - x|_M = (2/c) sinh(c d / 2)
            let chord = minkowski(&diff, &diff).max(0.0).sqrt();
            2.0 / c * (0.5 * c * chord).asinh()
        }
    }
}

pub fn exp(x: &ModelPoint, v: &DVector<f64>) -> Result<ModelPoint, GeometryError> {
    if v.len() != x.coords.len() {
        return Err(GeometryError::InvalidPoint(format!(
            "tangent vector has {} coordinates, expected {}",
            v.len(),
            x.coords.len()
        )));
    }
    match x.model {
        Model::Euclidean { .. } => Ok(ModelPoint {
            model: x.model,
            coords: &x.coords + v,
        }),
        Model::Hyperboloid { c, .. } => {
            let t = c * tangent_norm(x, v);
            let sinc = if t < 1e-6 { 1.0 + t * t / 6.0 } else { t.sinh() / t };
            let w = &x.coords * t.cosh() + v * sinc;
            if w.iter().any(|a| !a.is_finite()) {
                return Err(GeometryError::InvalidPoint("exponential overflowed".into()));
            }
            Ok(x.model.resheet(w))
        }
    }
}

/// Inverse of `exp`; the zero vector at coincident points.
pub fn log(x: &ModelPoint, y: &ModelPoint) -> Result<DVector<f64>, GeometryError> {
    x.model.same(y.model)?;
    Ok(log_unchecked(x, y))
}

pub(crate) fn log_unchecked(x: &ModelPoint, y: &ModelPoint) -> DVector<f64> {
    let diff = &y.coords - &x.coords;
    match x.model {
        Model::Euclidean { .. } => diff,
        Model::Hyperboloid { .. } => {
            let u = project_to_tangent(x, &diff);
            let n = tangent_norm(x, &u);
            if n == 0.0 {
                return DVector::zeros(diff.len());
            }
            u * (dist_unchecked(x, y) / n)
        }
    }
}

/// Point at parameter `t` on the geodesic from `x` (t = 0) to `y` (t = 1).
pub fn geodesic_point(x: &ModelPoint, y: &ModelPoint, t: f64) -> Result<ModelPoint, GeometryError> {
    x.model.same(y.model)?;
    if t == 0.0 {
        return Ok(x.clone());
    }
    if t == 1.0 {
        return Ok(y.clone());
    }
    match x.model {
        Model::Euclidean { .. } => Ok(ModelPoint {
            model: x.model,
            coords: &x.coords + (&y.coords - &x.coords) * t,
        }),
        Model::Hyperboloid { .. } => exp(x, &(log_unchecked(x, y) * t)),
    }
}

pub fn midpoint(x: &ModelPoint, y: &ModelPoint) -> Result<ModelPoint, GeometryError> {
    geodesic_point(x, y, 0.5)
}

/// Riemannian angle at `x` between the geodesics to `y` and to `z`.
pub fn angle_at(x: &ModelPoint, y: &ModelPoint, z: &ModelPoint) -> Result<f64, GeometryError> {
    x.model.same(y.model)?;
    x.model.same(z.model)?;
    let u = log_unchecked(x, y);
    let v = log_unchecked(x, z);
    let (nu, nv) = (tangent_norm(x, &u), tangent_norm(x, &v));
    if nu == 0.0 || nv == 0.0 {
        return Err(GeometryError::Degenerate("angle at a vertex with a zero-length leg".into()));
    }
    Ok((tangent_inner(x, &u, &v) / (nu * nv)).clamp(-1.0, 1.0).acos())
}
