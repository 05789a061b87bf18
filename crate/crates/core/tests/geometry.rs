mod common;

use std::f64::consts::PI;

use common::{enclosing_center_3, triangle_angles};
use nalgebra::DVector;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stfix::geometry::{
    angle_at, barycenter, cartan_fixed_point, cat0_defect, circumcenter, dist, exp, fixed_subspace, log, midpoint,
    tangent_norm, Isometry, Model, ModelPoint,
};

fn models() -> Vec<Model> {
    vec![
        Model::euclidean(2),
        Model::euclidean(4),
        Model::hyperboloid(2, 1.0).unwrap(),
        Model::hyperboloid(3, 0.5).unwrap(),
        Model::hyperboloid(3, 2.0).unwrap(),
    ]
}

fn curvature(m: Model) -> f64 {
    m.curvature_scale().unwrap_or(0.0)
}

fn points(m: Model, rng: &mut ChaCha8Rng, k: usize) -> Vec<ModelPoint> {
    (0..k).map(|_| m.random_point(rng, 2.0)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn metric_axioms(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for m in models() {
            let p = points(m, &mut rng, 3);
            let (a, b, c) = (dist(&p[0], &p[1]).unwrap(), dist(&p[1], &p[2]).unwrap(), dist(&p[0], &p[2]).unwrap());
            prop_assert!((a - dist(&p[1], &p[0]).unwrap()).abs() < 1e-12);
            prop_assert!(c <= a + b + 1e-12);
            prop_assert!(dist(&p[0], &p[0]).unwrap() < 1e-7);
        }
    }

    #[test]
    fn exp_inverts_log(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for m in models() {
            let p = points(m, &mut rng, 2);
            let v = log(&p[0], &p[1]).unwrap();
            let back = exp(&p[0], &v).unwrap();
            prop_assert!(dist(&back, &p[1]).unwrap() < 1e-9, "{m} {} {}", dist(&back, &p[1]).unwrap(), dist(&p[0], &p[1]).unwrap());
            let u = p[0].random_unit_tangent(&mut rng) * rng.random_range(0.0..2.0);
            let q = exp(&p[0], &u).unwrap();
            prop_assert!((dist(&p[0], &q).unwrap() - tangent_norm(&p[0], &u)).abs() < 1e-9);
        }
    }

    #[test]
    fn midpoint_is_equidistant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for m in models() {
            let p = points(m, &mut rng, 2);
            let mid = midpoint(&p[0], &p[1]).unwrap();
            let d = dist(&p[0], &p[1]).unwrap();
            prop_assert!((dist(&mid, &p[0]).unwrap() - d / 2.0).abs() < 1e-9, "{m} {} {}", dist(&mid, &p[0]).unwrap() - d / 2.0, d);
            prop_assert!((dist(&mid, &p[1]).unwrap() - d / 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn cat0_inequality(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for m in models() {
            let p = points(m, &mut rng, 3);
            let d = cat0_defect(&p[0], &p[1], &p[2]).unwrap();
            prop_assert!(d >= -1e-12, "{m} {d}");
            if m.is_flat() {
                prop_assert!(d.abs() <= 1e-12, "{m} {d}");
            }
        }
    }

    #[test]
    fn angles_follow_the_law_of_cosines(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for m in models() {
            let p = points(m, &mut rng, 3);
            let a = dist(&p[1], &p[2]).unwrap();
            let b = dist(&p[0], &p[2]).unwrap();
            let c = dist(&p[0], &p[1]).unwrap();
            prop_assume!(a.min(b).min(c) > 1e-3);
            let expect = triangle_angles(a, b, c, curvature(m));
            let got = [
                angle_at(&p[0], &p[1], &p[2]).unwrap(),
                angle_at(&p[1], &p[0], &p[2]).unwrap(),
                angle_at(&p[2], &p[0], &p[1]).unwrap(),
            ];
            for (g, e) in got.iter().zip(&expect) {
                prop_assert!((g - e).abs() < 1e-6, "{m} {got:?} {expect:?}");
            }
            let sum: f64 = got.iter().sum();
            if m.is_flat() {
                prop_assert!((sum - PI).abs() < 1e-9);
            } else {
                prop_assert!(sum <= PI + 1e-9);
            }
        }
    }

    #[test]
    fn isometries_preserve_distance(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = DVector::from_fn(3, |_, _| rng.random_range(-1.0..1.0));
        let c = DVector::from_fn(3, |_, _| rng.random_range(-1.0..1.0));
        let h = Model::hyperboloid(3, 1.5).unwrap();
        let maps = [
            Isometry::euclidean_reflection(&n, &c).unwrap(),
            Isometry::boost(h, 1, rng.random_range(-1.0..1.0)).unwrap(),
            Isometry::hyperboloid_rotation(h, 1, 3, rng.random_range(0.0..6.0)).unwrap(),
        ];
        for g in maps {
            let m = g.model();
            let p = points(m, &mut rng, 2);
            let before = dist(&p[0], &p[1]).unwrap();
            let after = dist(&g.apply(&p[0]).unwrap(), &g.apply(&p[1]).unwrap()).unwrap();
            prop_assert!((before - after).abs() < 1e-9 * (1.0 + before));
            let back = g.inverse().apply(&g.apply(&p[0]).unwrap()).unwrap();
            prop_assert!(dist(&back, &p[0]).unwrap() < 1e-9);
        }
    }

    #[test]
    fn planar_circumcenter_matches_enclosing_disc(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = Model::euclidean(2);
        let p = points(m, &mut rng, 3);
        let (c, r) = circumcenter(&p).unwrap();
        let expect = enclosing_center_3([p[0].coords(), p[1].coords(), p[2].coords()]);
        prop_assert!((c.coords() - &expect).norm() < 1e-7);
        let far = p.iter().map(|q| dist(&c, q).unwrap()).fold(0.0, f64::max);
        prop_assert!((far - r).abs() < 1e-7);
    }

    #[test]
    fn euclidean_barycenter_is_the_weighted_mean(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = Model::euclidean(3);
        let p = points(m, &mut rng, 4);
        let w: Vec<f64> = (0..4).map(|_| rng.random_range(0.1..1.0)).collect();
        let b = barycenter(&p, &w).unwrap();
        let total: f64 = w.iter().sum();
        let mean = p.iter().zip(&w).fold(DVector::zeros(3), |acc, (q, wi)| acc + q.coords() * *wi) / total;
        prop_assert!((b.coords() - mean).norm() < 1e-9);
    }

    #[test]
    fn hyperbolic_barycenter_balances_logs(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = Model::hyperboloid(2, 1.0).unwrap();
        let p = points(m, &mut rng, 4);
        let b = barycenter(&p, &[1.0; 4]).unwrap();
        let g = p.iter().fold(DVector::zeros(3), |acc, q| acc + log(&b, q).unwrap());
        prop_assert!(tangent_norm(&b, &g) < 1e-7, "{}", tangent_norm(&b, &g));
    }

    #[test]
    fn mirror_projection_is_the_foot_of_the_perpendicular(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = Model::euclidean(3);
        let n = DVector::from_fn(3, |_, _| rng.random_range(-1.0..1.0)).normalize();
        let c = DVector::from_fn(3, |_, _| rng.random_range(-1.0..1.0));
        let mirror = fixed_subspace(m, &[Isometry::euclidean_reflection(&n, &c).unwrap()]).unwrap();
        let x = m.random_point(&mut rng, 3.0);
        let foot = x.coords() - &n * (x.coords() - &c).dot(&n);
        let proj = mirror.project(&x).unwrap();
        prop_assert!((proj.coords() - foot).norm() < 1e-9);
        prop_assert!((mirror.distance(&x).unwrap() - (x.coords() - &c).dot(&n).abs()).abs() < 1e-9);
    }
}

#[test]
fn cartan_point_of_a_dihedral_group_is_its_center() {
    let m = Model::euclidean(2);
    let center = DVector::from_row_slice(&[1.5, -0.5]);
    let a = PI / 5.0;
    let refl = |t: f64| Isometry::euclidean_reflection(&DVector::from_row_slice(&[t.cos(), t.sin()]), &center).unwrap();
    let x0 = m.point(DVector::from_row_slice(&[4.0, 2.0])).unwrap();
    let q = cartan_fixed_point(&[refl(0.0), refl(a)], &x0).unwrap();
    assert!((q.coords() - center).norm() < 1e-8);
}

#[test]
fn hyperbolic_cartan_point_is_fixed() {
    let h = Model::hyperboloid(2, 1.0).unwrap();
    let hide = Isometry::boost(h, 1, 0.7).unwrap();
    let rot = Isometry::hyperboloid_rotation(h, 1, 2, 2.0 * PI / 7.0).unwrap();
    let g = hide.compose(&rot).unwrap().compose(&hide.inverse()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let q = cartan_fixed_point(&[g.clone()], &h.random_point(&mut rng, 1.0)).unwrap();
    assert!(g.displacement(&q).unwrap() < 1e-8);
    assert!(dist(&q, &hide.apply(&h.origin()).unwrap()).unwrap() < 1e-7);
}
