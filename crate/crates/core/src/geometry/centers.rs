//! Circumcenters, barycenters and Cartan fixed points of finite orbits.

use nalgebra::{DMatrix, DVector};

use crate::linalg;
use crate::tolerance::Tolerances;

use super::isometry::Isometry;
use super::model::{dist_unchecked, exp, log_unchecked, tangent_norm, Model, ModelPoint};
use super::GeometryError;

fn check_points(points: &[ModelPoint]) -> Result<Model, GeometryError> {
    let first = points
        .first()
        .ok_or_else(|| GeometryError::Parameter("at least one point is required".into()))?;
    for p in points {
        first.model.same(p.model)?;
    }
    Ok(first.model)
}

/// Center of the smallest ball containing `points`.
///
/// The squared radius in the flat case, and `cosh(c r)` on the hyperboloid,
/// are monotone in `lambda^T M lambda` maximized over the simplex, where
/// `M[i][j] = |p_i - p_j|^2 / 2` in the ambient form; the center is the
/// normalized combination `sum lambda_i p_i`. The maximization runs an
/// active-set method: solve for the stationary point on the current support,
/// step back to the simplex when a weight turns negative, and add the point
/// with the largest KKT violation. Faces where the quadratic fails to be
/// strictly concave are left along an ascent direction.
///
/// On the hyperboloid the ambient coordinates grow like `exp(c d)`, so
/// accuracy degrades once `c` times the spread exceeds about 15.
pub fn circumcenter_with(points: &[ModelPoint], tol: &Tolerances) -> Result<(ModelPoint, f64), GeometryError> {
    let model = check_points(points)?;
    let n = points.len();
    let mut m = DMatrix::zeros(n, n);
    let mut best = (0, 0, 0.0);
    for i in 0..n {
        for j in 0..i {
            let d = &points[i].coords - &points[j].coords;
            let v = 0.5 * model.inner(&d, &d).max(0.0);
            m[(i, j)] = v;
            m[(j, i)] = v;
            if v > best.2 {
                best = (i, j, v);
            }
        }
    }
    let size = points.iter().map(|p| p.coords.amax()).fold(0.0, f64::max);
    if best.2.sqrt() <= 1e-14 * (1.0 + size) {
        let radius = points.iter().map(|p| dist_unchecked(&points[0], p)).fold(0.0, f64::max);
        return Ok((points[0].clone(), radius));
    }

    let mut lambda = DVector::zeros(n);
    lambda[best.0] = 0.5;
    lambda[best.1] = 0.5;
    let mut support = vec![best.0.min(best.1), best.0.max(best.1)];
    let cap = 50 * n + 100;
    let mut gap = f64::INFINITY;
    let mut converged = false;
    let mut last_added = None;
    for _ in 0..cap {
        let k = support.len();
        let mut kkt = DMatrix::zeros(k + 1, k + 1);
        for (a, &i) in support.iter().enumerate() {
            for (b, &j) in support.iter().enumerate() {
                kkt[(a, b)] = m[(i, j)];
            }
            kkt[(a, k)] = 1.0;
            kkt[(k, a)] = 1.0;
        }
        if let Some(mut d) = ascent_direction(&m, &support) {
            // the objective is not strictly concave on this face: move along
            // a direction where it only grows until a weight vanishes
            let g = &m * &lambda;
            let slope: f64 = support.iter().zip(&d).map(|(&i, di)| di * g[i]).sum();
            let newest = last_added.and_then(|j| support.iter().position(|&i| i == j));
            let flip = if slope.abs() > 1e-14 * (1.0 + g.amax()) {
                slope < 0.0
            } else {
                newest.is_some_and(|pos| d[pos] < 0.0)
            };
            if flip {
                d.iter_mut().for_each(|x| *x = -*x);
            }
            let (pos, t) = support
                .iter()
                .zip(&d)
                .enumerate()
                .filter(|(_, (_, &di))| di < 0.0)
                .map(|(pos, (&i, &di))| (pos, -lambda[i] / di))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .ok_or_else(|| GeometryError::Degenerate("circumcenter support has no exit direction".into()))?;
            for (&i, &di) in support.iter().zip(&d) {
                lambda[i] += t * di;
            }
            lambda[support[pos]] = 0.0;
            support.remove(pos);
            support.retain(|&i| lambda[i] > 0.0);
            continue;
        }
        let mut rhs = DVector::zeros(k + 1);
        rhs[k] = 1.0;
        let sol = match kkt.clone().lu().solve(&rhs) {
            Some(x) if x.iter().all(|v| v.is_finite()) => x,
            _ => linalg::lstsq(&kkt, &rhs, 1e-14),
        };
        let target: Vec<f64> = sol.iter().take(k).copied().collect();

        if let Some((pos, t)) = support
            .iter()
            .zip(&target)
            .enumerate()
            .filter(|(_, (_, &tv))| tv < 0.0)
            .map(|(pos, (&i, &tv))| (pos, lambda[i] / (lambda[i] - tv)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
        {
            if t <= 0.0 && last_added == Some(support[pos]) {
                // the candidate cannot enter: the current support is optimal
                // up to rounding
                support.remove(pos);
                converged = true;
                break;
            }
            for (&i, &tv) in support.iter().zip(&target) {
                lambda[i] += t * (tv - lambda[i]);
            }
            lambda[support[pos]] = 0.0;
            support.remove(pos);
            support.retain(|&i| lambda[i] > 0.0);
            let s: f64 = support.iter().map(|&i| lambda[i]).sum();
            for &i in &support {
                lambda[i] /= s;
            }
            continue;
        }
        for (&i, &tv) in support.iter().zip(&target) {
            lambda[i] = tv;
        }

        let g = &m * &lambda;
        let mu = lambda.dot(&g);
        let (j, gj) = g
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        gap = (gj - mu) / mu;
        if gap <= tol.circumcenter_kkt * 1e-3 || support.contains(&j) {
            converged = true;
            break;
        }
        support.push(j);
        support.sort_unstable();
        last_added = Some(j);
    }

    let combo = points
        .iter()
        .zip(lambda.iter())
        .fold(DVector::zeros(model.ambient_dim()), |acc, (p, &l)| acc + &p.coords * l);
    let center = model
        .normalize(&combo)
        .ok_or_else(|| GeometryError::Degenerate("circumcenter combination is not timelike".into()))?;
    if !converged && gap > tol.circumcenter_kkt {
        return Err(GeometryError::NonConvergence {
            what: "circumcenter".into(),
            iterations: cap,
            gap,
            last: center.coords.iter().copied().collect(),
        });
    }
    let radius = points.iter().map(|p| dist_unchecked(&center, p)).fold(0.0, f64::max);
    Ok((center, radius))
}

/// A zero-sum direction on the face `support` along which `x^T M x` is not
/// strictly concave, if there is one.
fn ascent_direction(m: &DMatrix<f64>, support: &[usize]) -> Option<Vec<f64>> {
    let k = support.len();
    if k < 2 {
        return None;
    }
    // cheap certificate first: the face is strictly concave with margin when
    // the quadratic on the differences `e_a - e_k` is negative definite
    let eps = 1e-12 * (1.0 + m.amax());
    let last = support[k - 1];
    let diffs = DMatrix::from_fn(k - 1, k - 1, |a, b| {
        let (i, j) = (support[a], support[b]);
        let v = m[(i, j)] - m[(i, last)] - m[(last, j)] + m[(last, last)];
        -v - if a == b { k as f64 * eps } else { 0.0 }
    });
    if diffs.cholesky().is_some() {
        return None;
    }
    let ones = DMatrix::from_element(1, k, 1.0);
    let basis = linalg::null_space(&ones, 1e-12);
    let face = DMatrix::from_fn(k, k, |a, b| m[(support[a], support[b])]);
    let reduced = basis.transpose() * face * &basis;
    let (vals, vecs) = linalg::symmetric_eigen(&reduced);
    let top = vals.len() - 1;
    if vals[top] < -eps {
        return None;
    }
    Some((&basis * vecs.column(top)).iter().copied().collect())
}

pub fn circumcenter(points: &[ModelPoint]) -> Result<(ModelPoint, f64), GeometryError> {
    circumcenter_with(points, &Tolerances::DEFAULT)
}

/// Minimizer of `sum w_i d(x, p_i)^2`, by the iteration
/// `x <- exp(x, sum w_i log(x, p_i) / (L sum w_i))`, where `L` bounds the
/// Hessian of the objective at `x`.
pub fn barycenter_with(points: &[ModelPoint], weights: &[f64], tol: &Tolerances) -> Result<ModelPoint, GeometryError> {
    let model = check_points(points)?;
    if weights.len() != points.len() {
        return Err(GeometryError::Parameter("one weight per point is required".into()));
    }
    if weights.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
        return Err(GeometryError::Parameter("weights must be finite and nonnegative".into()));
    }
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(GeometryError::Parameter("weights must have a positive sum".into()));
    }
    let combo = points
        .iter()
        .zip(weights)
        .fold(DVector::zeros(model.ambient_dim()), |acc, (p, &w)| acc + &p.coords * (w / total));
    let mut x = model
        .normalize(&combo)
        .ok_or_else(|| GeometryError::Degenerate("weighted mean is not timelike".into()))?;
    if model.is_flat() {
        return Ok(x);
    }

    let spread = points.iter().map(|p| dist_unchecked(&x, p)).fold(0.0, f64::max);
    let c = model.curvature_scale().expect("curved model");
    let cap = 5000;
    let mut grad = f64::INFINITY;
    for _ in 0..cap {
        let step = points
            .iter()
            .zip(weights)
            .fold(DVector::zeros(model.ambient_dim()), |acc, (p, &w)| acc + log_unchecked(&x, p) * (w / total));
        let previous = grad;
        grad = tangent_norm(&x, &step);
        if grad <= 1e-14 * (1.0 + spread) || (grad <= tol.barycenter_gradient && grad > 0.9 * previous) {
            return Ok(x);
        }
        // the Hessian of d^2/2 is at most c d coth(c d), so a step of 1/L
        // with L the weighted mean of those bounds never overshoots
        let l = points
            .iter()
            .zip(weights)
            .map(|(p, &w)| {
                let t = c * dist_unchecked(&x, p);
                let bound = if t < 1e-8 { 1.0 } else { t / t.tanh() };
                w / total * bound
            })
            .sum::<f64>()
            .max(1.0);
        x = exp(&x, &(step / l))?;
    }
    if grad <= tol.barycenter_gradient {
        return Ok(x);
    }
    Err(GeometryError::NonConvergence {
        what: "barycenter".into(),
        iterations: cap,
        gap: grad,
        last: x.coords.iter().copied().collect(),
    })
}

pub fn barycenter(points: &[ModelPoint], weights: &[f64]) -> Result<ModelPoint, GeometryError> {
    barycenter_with(points, weights, &Tolerances::DEFAULT)
}

/// Orbit of `x0` under the group generated by `generators`, breadth first.
pub fn orbit(generators: &[Isometry], x0: &ModelPoint, cap: usize, merge_tol: f64) -> Result<Vec<ModelPoint>, GeometryError> {
    for g in generators {
        x0.model.same(g.model())?;
    }
    let mut points = vec![x0.clone()];
    let mut next = 0;
    while next < points.len() {
        let x = points[next].clone();
        next += 1;
        for g in generators {
            let y = g.apply_unchecked(&x);
            let tol = merge_tol * (1.0 + y.magnitude());
            if points.iter().any(|p| dist_unchecked(p, &y) <= tol) {
                continue;
            }
            if points.len() >= cap {
                return Err(GeometryError::OrbitCap { cap });
            }
            points.push(y);
        }
    }
    Ok(points)
}

/// Circumcenter of the orbit of `x0`, checked to be fixed by every generator.
pub fn cartan_fixed_point_with(
    generators: &[Isometry],
    x0: &ModelPoint,
    cap: usize,
    tol: &Tolerances,
) -> Result<ModelPoint, GeometryError> {
    let pts = orbit(generators, x0, cap, tol.orbit_merge)?;
    let (center, _) = circumcenter_with(&pts, tol)?;
    let worst = generators
        .iter()
        .map(|g| dist_unchecked(&g.apply_unchecked(&center), &center))
        .fold(0.0, f64::max);
    if worst > tol.fixedness {
        return Err(GeometryError::NotFixed { displacement: worst });
    }
    Ok(center)
}

pub fn cartan_fixed_point(generators: &[Isometry], x0: &ModelPoint) -> Result<ModelPoint, GeometryError> {
    cartan_fixed_point_with(generators, x0, crate::algebra::DEFAULT_CAP, &Tolerances::DEFAULT)
}
