//! Euclidean side of the fixed-point argument: the affine minimization of
//! `sum d^2(x, Fix_{i,j})` and the barycenter inequality.

use nalgebra::{DMatrix, DVector};

use crate::geometry::{fixed_subspace, Isometry, Model, ModelPoint};
use crate::linalg;

use super::{SolverError, PAIR_INDICES, PAIR_LABELS};

#[derive(Clone, Debug, PartialEq)]
pub struct FhAffineResult {
    pub q: ModelPoint,
    pub f_value: f64,
    /// Projections of `q` onto the fixed sets of `G_{1,2}`, `G_{1,3}`, `G_{2,3}`.
    pub projections: [ModelPoint; 3],
}

/// Exact minimizer of `x -> sum_{i<j} d(x, Fix(G_{i,j}))^2` for three groups
/// of Euclidean isometries, by linear least squares on the affine map
/// `x -> (x - pi_{1,2}(x), x - pi_{1,3}(x), x - pi_{2,3}(x))`.
pub fn fh_affine_minimize(actions: &[Vec<Isometry>; 3]) -> Result<FhAffineResult, SolverError> {
    let model = actions
        .iter()
        .flatten()
        .next()
        .map(|g| g.model())
        .ok_or_else(|| SolverError::Parameter("no generators given".into()))?;
    let d = match model {
        Model::Euclidean { dim } => dim,
        Model::Hyperboloid { .. } => {
            return Err(SolverError::Parameter("the affine minimization is Euclidean".into()));
        }
    };
    let mut a = DMatrix::zeros(3 * d, d);
    let mut rhs = DVector::zeros(3 * d);
    let mut sets = Vec::with_capacity(3);
    for (i, (&(p, q), label)) in PAIR_INDICES.iter().zip(PAIR_LABELS).enumerate() {
        let gens: Vec<Isometry> = actions[p].iter().chain(&actions[q]).cloned().collect();
        let fixed = fixed_subspace(model, &gens).map_err(|e| SolverError::EmptyFixedSet {
            pair: label.to_string(),
            reason: e.to_string(),
        })?;
        let (base, dirs) = fixed.affine_parts().expect("Euclidean fixed set");
        let residual = DMatrix::identity(d, d) - dirs * dirs.transpose();
        rhs.rows_mut(i * d, d).copy_from(&(&residual * base));
        a.view_mut((i * d, 0), (d, d)).copy_from(&residual);
        sets.push(fixed);
    }
    let x = linalg::lstsq(&a, &rhs, 1e-12);
    let f_value = (&a * &x - &rhs).norm_squared();
    let q = model.point(x)?;
    let projections = sets
        .iter()
        .map(|f| f.project(&q))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FhAffineResult {
        q,
        f_value,
        projections: projections.try_into().expect("three pairs"),
    })
}

/// `d^2(q, v)` against `4 d^2(q, opposite side)` at each vertex `v`, for `q`
/// the centroid.
#[derive(Clone, Debug, PartialEq)]
pub struct BarycenterRecord {
    pub q: DVector<f64>,
    pub lhs: [f64; 3],
    pub rhs: [f64; 3],
    /// `min (lhs - rhs)`.
    pub min_slack: f64,
    pub holds: bool,
}

fn segment_distance_sq(q: &DVector<f64>, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let ab = b - a;
    let len = ab.norm_squared();
    let t = if len == 0.0 { 0.0 } else { ((q - a).dot(&ab) / len).clamp(0.0, 1.0) };
    (q - (a + ab * t)).norm_squared()
}

/// The inequality holds when every slack is at least `-slack_tol` times the
/// largest squared distance from `q` to a vertex, plus one.
pub fn barycenter_inequality_check(
    x: &ModelPoint,
    y: &ModelPoint,
    z: &ModelPoint,
    slack_tol: f64,
) -> Result<BarycenterRecord, SolverError> {
    for p in [x, y, z] {
        if !p.model().is_flat() {
            return Err(SolverError::Parameter("the barycenter inequality is checked in Euclidean space".into()));
        }
        if p.model() != x.model() {
            return Err(SolverError::Parameter("points live in different spaces".into()));
        }
    }
    let v = [x.coords(), y.coords(), z.coords()];
    let q = (v[0] + v[1] + v[2]) / 3.0;
    let mut lhs = [0.0; 3];
    let mut rhs = [0.0; 3];
    for i in 0..3 {
        lhs[i] = (&q - v[i]).norm_squared();
        rhs[i] = 4.0 * segment_distance_sq(&q, v[(i + 1) % 3], v[(i + 2) % 3]);
    }
    let min_slack = (0..3).map(|i| lhs[i] - rhs[i]).fold(f64::INFINITY, f64::min);
    let scale = lhs.iter().copied().fold(0.0, f64::max);
    Ok(BarycenterRecord {
        q,
        lhs,
        rhs,
        min_slack,
        holds: min_slack >= -slack_tol * (1.0 + scale),
    })
}
