//! CAT(0) comparison quantities.

use nalgebra::DVector;

use super::model::{dist_unchecked, exp, log_unchecked, midpoint, Model, ModelPoint};
use super::GeometryError;

/// `d(x,y)^2/2 + d(x,z)^2/2 - d(y,z)^2/4 - d(x, m(y,z))^2`, nonnegative in a
/// CAT(0) space and zero in a flat one.
pub fn cat0_defect(x: &ModelPoint, y: &ModelPoint, z: &ModelPoint) -> Result<f64, GeometryError> {
    x.model.same(y.model)?;
    x.model.same(z.model)?;
    let m = midpoint(y, z)?;
    let dxy = dist_unchecked(x, y);
    let dxz = dist_unchecked(x, z);
    let dyz = dist_unchecked(y, z);
    let dxm = dist_unchecked(x, &m);
    Ok(0.5 * dxy * dxy + 0.5 * dxz * dxz - 0.25 * dyz * dyz - dxm * dxm)
}

/// Euclidean angle opposite the side `c` in a triangle with sides `a, b, c`.
pub fn comparison_angle(a: f64, b: f64, c: f64) -> Result<f64, GeometryError> {
    if [a, b, c].iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(GeometryError::TriangleInequality(format!("side lengths must be nonnegative: {a}, {b}, {c}")));
    }
    let slack = 1e-12 * (a + b + c);
    if a > b + c + slack || b > a + c + slack || c > a + b + slack {
        return Err(GeometryError::TriangleInequality(format!("sides {a}, {b}, {c}")));
    }
    if a == 0.0 || b == 0.0 {
        return Err(GeometryError::Degenerate("a side adjacent to the angle has length zero".into()));
    }
    Ok(((a * a + b * b - c * c) / (2.0 * a * b)).clamp(-1.0, 1.0).acos())
}

/// CAT(0) defect of a probe triangle after blowing the metric up by
/// `scale`, normalized by the squared diameter.
///
/// The probe is read in normal coordinates at the apex and re-embedded with
/// the same coordinates into the hyperboloid of curvature scale `c / scale`,
/// which is the blown-up space seen at unit size. The flat model has zero
/// defect at every scale.
pub fn flatness_defect(scale: f64, probe: &[ModelPoint; 3]) -> Result<f64, GeometryError> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(GeometryError::Parameter(format!("scale must be positive, got {scale}")));
    }
    let model = probe[0].model;
    model.same(probe[1].model)?;
    model.same(probe[2].model)?;
    let rescaled: Vec<ModelPoint> = match model {
        Model::Euclidean { .. } => probe.to_vec(),
        Model::Hyperboloid { dim, c } => {
            let o = model.origin();
            let target = Model::hyperboloid(dim, c / scale)?;
            let o2 = target.origin();
            probe
                .iter()
                .map(|p| {
                    let v: DVector<f64> = log_unchecked(&o, p);
                    exp(&o2, &v)
                })
                .collect::<Result<_, _>>()?
        }
    };
    let diam = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| dist_unchecked(&rescaled[i], &rescaled[j]))
        .fold(0.0, f64::max);
    if diam == 0.0 {
        return Ok(0.0);
    }
    let d = cat0_defect(&rescaled[0], &rescaled[1], &rescaled[2])?;
    Ok(d / (diam * diam))
}

/// The apex of `model` with the two points at distance 1 along the first two
/// coordinate directions: a right isosceles probe of unit legs.
pub fn unit_probe(model: Model) -> Result<[ModelPoint; 3], GeometryError> {
    if model.dim() < 2 {
        return Err(GeometryError::Parameter("a probe triangle needs dimension at least 2".into()));
    }
    let o = model.origin();
    let n = model.ambient_dim();
    let offset = n - model.dim();
    let leg = |i: usize| exp(&o, &DVector::from_fn(n, |r, _| if r == offset + i { 1.0 } else { 0.0 }));
    Ok([o.clone(), leg(0)?, leg(1)?])
}

/// `flatness_defect` at each scale, with successive ratios
/// `defect(s_{i+1}) / defect(s_i)`.
pub fn flatness_profile(scales: &[f64], probe: &[ModelPoint; 3]) -> Result<(Vec<f64>, Vec<f64>), GeometryError> {
    let defects: Vec<f64> = scales.iter().map(|&s| flatness_defect(s, probe)).collect::<Result<_, _>>()?;
    let ratios = defects
        .windows(2)
        .map(|w| if w[0] == 0.0 { 0.0 } else { w[1] / w[0] })
        .collect();
    Ok((defects, ratios))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    #[test]
    fn comparison_angles() {
        assert!((comparison_angle(1.0, 1.0, 1.0).unwrap() - FRAC_PI_3).abs() < 1e-15);
        assert!((comparison_angle(3.0, 4.0, 5.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((comparison_angle(1.0, 1.0, 2.0).unwrap() - PI).abs() < 1e-15);
        assert!(matches!(comparison_angle(1.0, 1.0, 3.0), Err(GeometryError::TriangleInequality(_))));
    }

    #[test]
    fn flat_defects_vanish() {
        let m = Model::euclidean(2);
        let p = |a: f64, b: f64| m.point(DVector::from_row_slice(&[a, b])).unwrap();
        let (x, y, z) = (p(0.3, 2.0), p(-1.0, 0.5), p(4.0, -2.0));
        assert!(cat0_defect(&x, &y, &z).unwrap().abs() < 1e-12);
        assert!(cat0_defect(&x, &y, &y).unwrap().abs() < 1e-12);
        assert_eq!(flatness_defect(3.0, &[x, y, z]).unwrap().abs() < 1e-12, true);
    }

    #[test]
    fn probe_defect_scales_like_curvature() {
        let probe = unit_probe(Model::hyperboloid(2, 1.0).unwrap()).unwrap();
        assert!((dist_unchecked(&probe[0], &probe[1]) - 1.0).abs() < 1e-12);
        let (defects, ratios) = flatness_profile(&[1.0, 2.0, 4.0, 8.0, 64.0], &probe).unwrap();
        assert!(defects[0] > 0.0);
        for r in &ratios[..3] {
            assert!((0.15..=0.35).contains(r), "{ratios:?}");
        }
        assert!(defects[4] < 1e-3);
    }
}
