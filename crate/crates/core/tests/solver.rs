mod common;

use common::{affine_fixed_point, grid_argmin_2d, segment_distance};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stfix::geometry::{dist, exp, Isometry, Model, ModelPoint};
use stfix::solver::{
    barycenter_inequality_check, canonical_bytes, diam_k, energy_f, energy_h, fh_affine_minimize, good_point_step,
    minimize_f, monitor_ttt, scenario_generator, ScenarioKind, ScenarioParams, Status,
};

fn params(model: Model) -> ScenarioParams {
    ScenarioParams {
        model,
        ..ScenarioParams::default()
    }
}

fn e(c: &[f64]) -> ModelPoint {
    Model::euclidean(c.len()).point(DVector::from_row_slice(c)).unwrap()
}

#[test]
fn energy_is_non_increasing() {
    for model in [Model::euclidean(3), Model::hyperboloid(3, 1.0).unwrap()] {
        for kind in [ScenarioKind::Mirrors, ScenarioKind::Stress] {
            let s = scenario_generator(kind, &params(model), 5).unwrap();
            let r = minimize_f(&s).unwrap();
            assert_eq!(r.descent_violations, 0);
            for w in r.f_history.windows(2) {
                assert!(w[1] <= w[0] + 1e-12 * (1.0 + w[0]), "{kind} {model}");
            }
            let st = &r.final_state;
            let f = energy_f(&st.x, &st.y, &st.z).unwrap();
            assert!((f - st.f_value).abs() <= 1e-12 * (1.0 + f));
        }
    }
}

#[test]
fn minimal_triangles_are_stationary_within_their_fixed_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for model in [Model::euclidean(3), Model::euclidean(4), Model::hyperboloid(3, 1.0).unwrap()] {
        let s = scenario_generator(ScenarioKind::Stress, &params(model), 3).unwrap();
        let r = minimize_f(&s).unwrap();
        assert_eq!(r.status, Status::MinimalTriangle, "{model}");
        let st = &r.final_state;
        let base = st.f_value;
        let vertices = [&st.x, &st.y, &st.z];
        for (i, fixed) in s.fixed_sets().iter().enumerate() {
            for _ in 0..20 {
                let v = vertices[i];
                let u = v.random_unit_tangent(&mut rng) * 1e-4;
                let moved = fixed.project(&exp(v, &u).unwrap()).unwrap();
                let mut tri = [st.x.clone(), st.y.clone(), st.z.clone()];
                tri[i] = moved;
                let f = energy_f(&tri[0], &tri[1], &tri[2]).unwrap();
                assert!(f >= base - 1e-8, "{model} vertex {i}: {f} < {base}");
            }
        }
        // a minimal triangle in a CAT(0) space is never fat
        if let Some(c) = &r.certificate {
            assert!(c.angle_sum <= std::f64::consts::PI + 1e-9);
        }
    }
}

#[test]
fn coboundary_recovers_the_hidden_translation() {
    let p = ScenarioParams {
        heisenberg_p: 3,
        ..ScenarioParams::default()
    };
    for seed in [1, 2] {
        let s = scenario_generator(ScenarioKind::Coboundary, &p, seed).unwrap();
        let r = minimize_f(&s).unwrap();
        assert_eq!(r.status, Status::FixedPoint);
        let q = r.fixed_point.unwrap();
        assert!(dist(&q, s.planted().unwrap()).unwrap() < 1e-6);
        for g in s.generators() {
            assert!(g.displacement(&q).unwrap() <= 1e-8);
        }
    }
}

#[test]
fn planar_mirror_energy_matches_closed_form() {
    // every pair of distinct lines through v fixes only v, so h = 3 |x - v|^2
    let s = scenario_generator(ScenarioKind::Mirrors, &params(Model::euclidean(2)), 8).unwrap();
    let v = s.planted().unwrap().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..200 {
        let x = Model::euclidean(2).random_point(&mut rng, 3.0);
        let r = (x.coords() - v.coords()).norm();
        assert!((energy_h(&s, &x).unwrap() - 3.0 * r * r).abs() < 1e-9 * (1.0 + r * r));
        assert!(diam_k(&s, &x).unwrap() <= 2.0 * r + 1e-12);
        assert!(monitor_ttt(&s, &x).unwrap().holds());
    }
}

#[test]
fn good_point_steps_halve_h() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for model in [Model::euclidean(3), Model::hyperboloid(2, 1.0).unwrap()] {
        let s = scenario_generator(ScenarioKind::Mirrors, &params(model), 2).unwrap();
        let center = s.planted().unwrap().clone();
        let mut applied = 0;
        for _ in 0..50 {
            let u = center.random_unit_tangent(&mut rng) * rng.random_range(0.1..2.0);
            let x = exp(&center, &u).unwrap();
            let (y, rec) = good_point_step(&s, &x, rng.random()).unwrap();
            assert!(rec.holds(), "{model} {rec:?}");
            if rec.applied {
                applied += 1;
                assert!(diam_k(&s, &y).unwrap() <= diam_k(&s, &x).unwrap() / 5.0 + 1e-12);
            }
        }
        assert!(applied > 0, "{model}");
    }
}

#[test]
fn scenarios_are_reproducible() {
    for kind in [ScenarioKind::Mirrors, ScenarioKind::Stress, ScenarioKind::Coboundary, ScenarioKind::RepEmbedded] {
        let p = ScenarioParams {
            heisenberg_p: 3,
            ..params(Model::euclidean(3))
        };
        let a = canonical_bytes(&scenario_generator(kind, &p, 9).unwrap());
        let b = canonical_bytes(&scenario_generator(kind, &p, 9).unwrap());
        let c = canonical_bytes(&scenario_generator(kind, &p, 10).unwrap());
        assert_eq!(a, b, "{kind}");
        assert_ne!(a, c, "{kind}");
    }
}

#[test]
fn out_of_scope_requests_fail() {
    let h = params(Model::hyperboloid(2, 1.0).unwrap());
    assert!(scenario_generator(ScenarioKind::Coboundary, &h, 0).is_err());
    assert!(scenario_generator(ScenarioKind::Custom, &h, 0).is_err());
    let flat = ScenarioParams {
        mirror_angle_deg: 180.0,
        ..params(Model::euclidean(2))
    };
    assert!(scenario_generator(ScenarioKind::Mirrors, &flat, 0).is_err());
}

fn random_line_reflection(rng: &mut ChaCha8Rng) -> Isometry {
    let t: f64 = rng.random_range(0.0..std::f64::consts::PI);
    let n = DVector::from_row_slice(&[t.cos(), t.sin()]);
    let c = DVector::from_fn(2, |_, _| rng.random_range(-2.0..2.0));
    Isometry::euclidean_reflection(&n, &c).unwrap()
}

#[test]
fn affine_minimizer_matches_grid_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..10 {
        let r: Vec<Isometry> = (0..3).map(|_| random_line_reflection(&mut rng)).collect();
        // each pair fixes the crossing point of its two lines
        let crossing = |a: &Isometry, b: &Isometry| {
            let g = a.compose(b).unwrap();
            affine_fixed_point(g.linear(), g.translation())
        };
        let v = [crossing(&r[0], &r[1]), crossing(&r[0], &r[2]), crossing(&r[1], &r[2])];
        let f = |x: f64, y: f64| {
            let p = DVector::from_row_slice(&[x, y]);
            v.iter().map(|q| (&p - q).norm_squared()).sum::<f64>()
        };
        let (gx, gy) = grid_argmin_2d(f, (0.0, 0.0), 50.0, 30);
        let res = fh_affine_minimize(&[vec![r[0].clone()], vec![r[1].clone()], vec![r[2].clone()]]).unwrap();
        assert!((res.q.coords()[0] - gx).abs() < 1e-6 && (res.q.coords()[1] - gy).abs() < 1e-6);
        assert!((res.f_value - f(gx, gy)).abs() < 1e-6 * (1.0 + res.f_value));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn barycenter_inequality_holds(dim in 2usize..=16, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = Model::euclidean(dim);
        let p: Vec<ModelPoint> = (0..3).map(|_| m.random_point(&mut rng, 5.0)).collect();
        let rec = barycenter_inequality_check(&p[0], &p[1], &p[2], 1e-12).unwrap();
        prop_assert!(rec.holds);
        let q = (p[0].coords() + p[1].coords() + p[2].coords()) / 3.0;
        for i in 0..3 {
            let opp = segment_distance(&q, p[(i + 1) % 3].coords(), p[(i + 2) % 3].coords());
            prop_assert!((rec.rhs[i] - 4.0 * opp * opp).abs() < 1e-9 * (1.0 + rec.rhs[i]));
            prop_assert!((rec.lhs[i] - (&q - p[i].coords()).norm_squared()).abs() < 1e-9 * (1.0 + rec.lhs[i]));
        }
    }

    #[test]
    fn equilateral_triangles_are_tight(dim in 2usize..=16, side in 0.1f64..10.0, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw = DMatrix::from_fn(dim, 2, |_, _| rng.random_range(-1.0..1.0));
        let q = raw.qr().q();
        let (a, b) = (q.column(0).into_owned(), q.column(1).into_owned());
        let shift = DVector::from_fn(dim, |_, _| rng.random_range(-3.0..3.0));
        let h = 3f64.sqrt() / 2.0;
        let pts = [
            &shift + &a * 0.0,
            &shift + &a * side,
            &shift + &a * (side / 2.0) + &b * (side * h),
        ];
        let m = Model::euclidean(dim);
        let p: Vec<ModelPoint> = pts.iter().map(|c| m.point(c.clone()).unwrap()).collect();
        let rec = barycenter_inequality_check(&p[0], &p[1], &p[2], 1e-12).unwrap();
        for i in 0..3 {
            prop_assert!((rec.lhs[i] - rec.rhs[i]).abs() < 1e-9 * (1.0 + rec.lhs[i]));
        }
    }
}

#[test]
fn energy_of_unit_right_triangle() {
    assert!((energy_f(&e(&[0.0, 0.0]), &e(&[3.0, 0.0]), &e(&[0.0, 4.0])).unwrap() - 50.0).abs() < 1e-12);
}
