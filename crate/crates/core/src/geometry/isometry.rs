//! Isometries of the two models: `x -> Q x + b` with `Q` orthogonal, and
//! Lorentz matrices preserving the upper sheet.

use nalgebra::{DMatrix, DVector};

use super::model::{dist_unchecked, minkowski, Model, ModelPoint};
use super::GeometryError;

const CHECK_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct Isometry {
    model: Model,
    linear: DMatrix<f64>,
    /// Zero for the hyperboloid.
    translation: DVector<f64>,
}

pub(crate) fn minkowski_gram(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::identity(n, n);
    j[(0, 0)] = -1.0;
    j
}

impl Isometry {
    pub fn identity(model: Model) -> Self {
        let n = model.ambient_dim();
        Self {
            model,
            linear: DMatrix::identity(n, n),
            translation: DVector::zeros(n),
        }
    }

    /// `x -> q x + b`; `q` must be orthogonal.
    pub fn euclidean(q: DMatrix<f64>, b: DVector<f64>) -> Result<Self, GeometryError> {
        let n = q.nrows();
        if q.ncols() != n || b.len() != n {
            return Err(GeometryError::Parameter("isometry shapes do not match".into()));
        }
        let defect = (q.transpose() * &q - DMatrix::identity(n, n)).amax();
        if defect > CHECK_TOL {
            return Err(GeometryError::Parameter(format!("matrix is not orthogonal (defect {defect:e})")));
        }
        Ok(Self {
            model: Model::euclidean(n),
            linear: q,
            translation: b,
        })
    }

    /// A Lorentz matrix `l` with `l^T J l = J` mapping the upper sheet to itself.
    pub fn hyperboloid(model: Model, l: DMatrix<f64>) -> Result<Self, GeometryError> {
        if model.is_flat() {
            return Err(GeometryError::Parameter("hyperboloid isometry needs a hyperboloid model".into()));
        }
        let n = model.ambient_dim();
        if l.shape() != (n, n) {
            return Err(GeometryError::Parameter(format!("expected a {n}x{n} matrix")));
        }
        let j = minkowski_gram(n);
        let defect = (l.transpose() * &j * &l - &j).amax();
        if defect > CHECK_TOL * (1.0 + l.norm_squared()) {
            return Err(GeometryError::Parameter(format!("matrix does not preserve the form (defect {defect:e})")));
        }
        if l[(0, 0)] <= 0.0 {
            return Err(GeometryError::Parameter("matrix swaps the two sheets".into()));
        }
        Ok(Self {
            model,
            linear: l,
            translation: DVector::zeros(n),
        })
    }

    /// `x -> q (x - v) + v`: the linear map `q` moved to fix `v`.
    pub fn about(q: DMatrix<f64>, v: &DVector<f64>) -> Result<Self, GeometryError> {
        let b = v - &q * v;
        Self::euclidean(q, b)
    }

    /// Reflection in the hyperplane through `point` with normal `normal`.
    pub fn euclidean_reflection(normal: &DVector<f64>, point: &DVector<f64>) -> Result<Self, GeometryError> {
        let nn = normal.norm_squared();
        if nn == 0.0 {
            return Err(GeometryError::Parameter("zero normal".into()));
        }
        let n = normal.len();
        let q = DMatrix::identity(n, n) - normal * normal.transpose() * (2.0 / nn);
        Self::about(q, point)
    }

    /// Rotation of the plane by `angle` about `center`.
    pub fn rotation_2d(angle: f64, center: &DVector<f64>) -> Result<Self, GeometryError> {
        let (s, c) = angle.sin_cos();
        Self::about(DMatrix::from_row_slice(2, 2, &[c, -s, s, c]), center)
    }

    /// Minkowski reflection `x -> x - 2 <x,n> n / <n,n>` in the hyperplane
    /// orthogonal to a spacelike `n`.
    pub fn hyperboloid_reflection(model: Model, normal: &DVector<f64>) -> Result<Self, GeometryError> {
        let nn = minkowski(normal, normal);
        if !(nn > 0.0) {
            return Err(GeometryError::Parameter("reflection normal must be spacelike".into()));
        }
        let n = model.ambient_dim();
        let mut jn = normal.clone();
        jn[0] = -jn[0];
        let l = DMatrix::identity(n, n) - normal * jn.transpose() * (2.0 / nn);
        Self::hyperboloid(model, l)
    }

    /// Rotation by `angle` in the plane of spatial coordinates `i`, `j`
    /// (1-based, so that coordinate 0 is the time axis).
    pub fn hyperboloid_rotation(model: Model, i: usize, j: usize, angle: f64) -> Result<Self, GeometryError> {
        let n = model.ambient_dim();
        if i == 0 || j == 0 || i >= n || j >= n || i == j {
            return Err(GeometryError::Parameter(format!("bad rotation plane ({i}, {j})")));
        }
        let (s, c) = angle.sin_cos();
        let mut l = DMatrix::identity(n, n);
        l[(i, i)] = c;
        l[(j, j)] = c;
        l[(i, j)] = -s;
        l[(j, i)] = s;
        Self::hyperboloid(model, l)
    }

    /// Boost with the given rapidity along spatial coordinate `axis`.
    pub fn boost(model: Model, axis: usize, rapidity: f64) -> Result<Self, GeometryError> {
        let n = model.ambient_dim();
        if axis == 0 || axis >= n {
            return Err(GeometryError::Parameter(format!("bad boost axis {axis}")));
        }
        let mut l = DMatrix::identity(n, n);
        l[(0, 0)] = rapidity.cosh();
        l[(axis, axis)] = rapidity.cosh();
        l[(0, axis)] = rapidity.sinh();
        l[(axis, 0)] = rapidity.sinh();
        Self::hyperboloid(model, l)
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn linear(&self) -> &DMatrix<f64> {
        &self.linear
    }

    pub fn translation(&self) -> &DVector<f64> {
        &self.translation
    }

    pub fn apply(&self, x: &ModelPoint) -> Result<ModelPoint, GeometryError> {
        self.model.same(x.model)?;
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &ModelPoint) -> ModelPoint {
        let y = &self.linear * &x.coords + &self.translation;
        match self.model {
            Model::Euclidean { .. } => ModelPoint {
                model: self.model,
                coords: y,
            },
            Model::Hyperboloid { .. } => self.model.resheet(y),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Result<Isometry, GeometryError> {
        self.model.same(other.model)?;
        Ok(Isometry {
            model: self.model,
            linear: &self.linear * &other.linear,
            translation: &self.linear * &other.translation + &self.translation,
        })
    }

    pub fn inverse(&self) -> Isometry {
        match self.model {
            Model::Euclidean { .. } => {
                let qt = self.linear.transpose();
                let b = -(&qt * &self.translation);
                Isometry {
                    model: self.model,
                    linear: qt,
                    translation: b,
                }
            }
            Model::Hyperboloid { .. } => {
                let j = minkowski_gram(self.linear.nrows());
                Isometry {
                    model: self.model,
                    linear: &j * self.linear.transpose() * &j,
                    translation: self.translation.clone(),
                }
            }
        }
    }

    /// `d(g x, x)`.
    pub fn displacement(&self, x: &ModelPoint) -> Result<f64, GeometryError> {
        self.model.same(x.model)?;
        Ok(dist_unchecked(&self.apply_unchecked(x), x))
    }

    /// Largest entry difference of the affine parts; used to identify group
    /// elements built as different products.
    pub fn distance_to(&self, other: &Isometry) -> f64 {
        (&self.linear - &other.linear)
            .amax()
            .max((&self.translation - &other.translation).amax())
    }
}
