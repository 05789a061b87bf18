//! Dense decompositions on top of faer, exchanged as nalgebra matrices.

use faer::{Mat, Side};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

fn to_faer<T: Copy>(a: &DMatrix<T>) -> Mat<T> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

fn from_faer<T: Copy + nalgebra::Scalar>(a: faer::MatRef<'_, T>) -> DMatrix<T> {
    DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

/// Thin SVD `A = U diag(s) V^*`, singular values in decreasing order.
pub struct Svd<T: nalgebra::Scalar> {
    pub u: DMatrix<T>,
    pub s: Vec<f64>,
    pub v: DMatrix<T>,
}

macro_rules! svd_impl {
    ($name:ident, $sv:ident, $t:ty, $re:expr) => {
        pub fn $name(a: &DMatrix<$t>) -> Svd<$t> {
            let (m, n) = a.shape();
            if m == 0 || n == 0 {
                return Svd {
                    u: DMatrix::zeros(m, 0),
                    s: Vec::new(),
                    v: DMatrix::zeros(n, 0),
                };
            }
            let svd = to_faer(a).thin_svd().expect("svd did not converge");
            let s = svd.S().column_vector().iter().map($re).collect();
            Svd {
                u: from_faer(svd.U()),
                s,
                v: from_faer(svd.V()),
            }
        }

        pub fn $sv(a: &DMatrix<$t>) -> Vec<f64> {
            if a.nrows() == 0 || a.ncols() == 0 {
                return Vec::new();
            }
            let mut s: Vec<f64> = to_faer(a)
                .singular_values()
                .expect("svd did not converge")
                .into_iter()
                .collect();
            s.sort_by(|x, y| y.total_cmp(x));
            s
        }
    };
}

svd_impl!(svd_real, singular_values_real, f64, |x: &f64| *x);
svd_impl!(svd_complex, singular_values_complex, Complex64, |x: &Complex64| x.re);

/// Eigen-decomposition of a Hermitian matrix, eigenvalues increasing.
pub fn hermitian_eigen(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    if a.nrows() == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let eig = to_faer(a).self_adjoint_eigen(Side::Lower).expect("eigensolver did not converge");
    let vals = eig.S().column_vector().iter().map(|x| x.re).collect();
    (vals, from_faer(eig.U()))
}

/// Eigen-decomposition of a real symmetric matrix, eigenvalues increasing.
pub fn symmetric_eigen(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    if a.nrows() == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let eig = to_faer(a).self_adjoint_eigen(Side::Lower).expect("eigensolver did not converge");
    let vals = eig.S().column_vector().iter().copied().collect();
    (vals, from_faer(eig.U()))
}

/// Orthonormal basis of the null space: right singular vectors whose
/// singular value is at most `tol` (missing ones when `A` is wide count too).
pub fn null_space(a: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let n = a.ncols();
    if a.nrows() == 0 {
        return DMatrix::identity(n, n);
    }
    // full V is needed when there are fewer rows than columns
    let padded;
    let a = if a.nrows() < n {
        padded = {
            let mut p = DMatrix::zeros(n, n);
            p.view_mut((0, 0), a.shape()).copy_from(a);
            p
        };
        &padded
    } else {
        a
    };
    let svd = svd_real(a);
    let keep: Vec<usize> = (0..svd.s.len()).filter(|&i| svd.s[i] <= tol).collect();
    DMatrix::from_fn(n, keep.len(), |r, c| svd.v[(r, keep[c])])
}

/// Minimum-norm least-squares solution of `A x = b`, discarding singular
/// values at or below `rcond` times the largest.
pub fn lstsq(a: &DMatrix<f64>, b: &DVector<f64>, rcond: f64) -> DVector<f64> {
    let svd = svd_real(a);
    let smax = svd.s.first().copied().unwrap_or(0.0);
    let utb = svd.u.transpose() * b;
    let mut x = DVector::zeros(a.ncols());
    for (i, &s) in svd.s.iter().enumerate() {
        if s > rcond * smax && s > 0.0 {
            x += svd.v.column(i) * (utb[i] / s);
        }
    }
    x
}
