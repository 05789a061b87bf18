//! Block descent of `f` over `X^{G_{1,2}} x X^{G_{1,3}} x X^{G_{2,3}}`.

use std::f64::consts::{FRAC_PI_3, PI};

use nalgebra::{DMatrix, DVector};

use crate::geometry::{
    angle_at, barycenter_with, cartan_fixed_point_with, dist, exp, log, midpoint, project_to_tangent, tangent_inner,
    GeodesicSubspace, Model, ModelPoint,
};
use crate::linalg;
use crate::repangle::{principal_angle, AngleReport, SubspaceBasis, INTERSECTION_TOL};

use super::energy::{energy_f, good_point_step, monitor_ttt, MonitorRecord};
use super::scenario::Scenario;
use super::{SolverError, PAIR_INDICES};

#[derive(Clone, Debug, PartialEq)]
pub struct TriangleState {
    /// In the fixed set of `G_{1,2}`.
    pub x: ModelPoint,
    /// In the fixed set of `G_{1,3}`.
    pub y: ModelPoint,
    /// In the fixed set of `G_{2,3}`.
    pub z: ModelPoint,
    pub f_value: f64,
    /// Angles at `x`, `y`, `z`; absent when a side is degenerate.
    pub vertex_angles: Option<[f64; 3]>,
    pub iteration: usize,
}

impl TriangleState {
    pub fn new(x: ModelPoint, y: ModelPoint, z: ModelPoint, iteration: usize) -> Result<Self, SolverError> {
        let f_value = energy_f(&x, &y, &z)?;
        let vertex_angles = match (angle_at(&x, &y, &z), angle_at(&y, &x, &z), angle_at(&z, &x, &y)) {
            (Ok(a), Ok(b), Ok(c)) => Some([a, b, c]),
            _ => None,
        };
        Ok(Self {
            x,
            y,
            z,
            f_value,
            vertex_angles,
            iteration,
        })
    }

    pub fn vertices(&self) -> [&ModelPoint; 3] {
        [&self.x, &self.y, &self.z]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    FixedPoint,
    MinimalTriangle,
    IterationCap,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::FixedPoint => "fixed-point",
            Status::MinimalTriangle => "minimal-triangle",
            Status::IterationCap => "iteration-cap",
        }
    }
}

/// How the certified fixed point was obtained from the barycenter of the
/// final triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Recentering {
    /// Circumcenter of the orbit under `G`.
    Cartan,
    /// Cyclic projections onto the three fixed sets, used when the orbit is
    /// too large to enumerate.
    Projections,
}

impl Recentering {
    pub fn as_str(self) -> &'static str {
        match self {
            Recentering::Cartan => "cartan",
            Recentering::Projections => "projections",
        }
    }
}

/// Vertex angles of a triangle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Certificate {
    pub angles: [f64; 3],
    /// Every angle strictly above `pi/3`.
    pub fat: bool,
    pub angle_sum: f64,
    /// `angle_sum - pi`, at most zero in a CAT(0) space.
    pub excess: f64,
    /// `pi/3 - min angle`: the smallest `eps` with every angle at least
    /// `pi/3 - eps`.
    pub fat_epsilon: f64,
    /// Shortest and longest side.
    pub side_range: (f64, f64),
}

#[derive(Clone, Debug)]
pub struct SolverResult {
    pub status: Status,
    pub final_state: TriangleState,
    pub fixed_point: Option<ModelPoint>,
    /// Largest displacement of the fixed point by a generator of `G`.
    pub fixed_displacement: Option<f64>,
    pub recentering: Option<Recentering>,
    pub certificate: Option<Certificate>,
    pub monitors: Vec<MonitorRecord>,
    pub f_history: Vec<f64>,
    /// Iterations where `f` went up by more than `1e-12 (1 + f)`.
    pub descent_violations: usize,
}

impl SolverResult {
    pub fn iterations(&self) -> usize {
        self.final_state.iteration
    }

    pub fn monitor_violations(&self) -> usize {
        self.monitors.iter().filter(|m| !m.holds()).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    /// Monitors run every `monitor_stride` iterations ...
    pub monitor_stride: usize,
    /// ... at most this many times.
    pub max_monitors: usize,
    /// Largest orbit enumerated for Cartan re-centering.
    pub recenter_cap: usize,
    pub projection_rounds: usize,
    pub armijo_initial: f64,
    pub armijo_shrink: f64,
    pub armijo_slope: f64,
    pub inner_steps: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            monitor_stride: 10,
            max_monitors: 20,
            recenter_cap: 2_000,
            projection_rounds: 10_000,
            armijo_initial: 1.0,
            armijo_shrink: 0.5,
            armijo_slope: 1e-4,
            inner_steps: 50,
        }
    }
}

fn pair_cost(p: &ModelPoint, a: &ModelPoint, b: &ModelPoint) -> f64 {
    let (da, db) = (dist(p, a).unwrap_or(f64::INFINITY), dist(p, b).unwrap_or(f64::INFINITY));
    da * da + db * db
}

/// Minimizer over `fixed` of `d(., a)^2 + d(., b)^2`, started at `x`.
fn vertex_update(
    fixed: &GeodesicSubspace,
    x: &ModelPoint,
    a: &ModelPoint,
    b: &ModelPoint,
    opts: &SolveOptions,
) -> Result<ModelPoint, SolverError> {
    if fixed.model().is_flat() {
        return Ok(fixed.project(&midpoint(a, b)?)?);
    }
    let mut x = x.clone();
    let mut fx = pair_cost(&x, a, b);
    for _ in 0..opts.inner_steps {
        let grad = (log(&x, a)? + log(&x, b)?) * -2.0;
        let g = project_to_tangent(&x, &fixed.project_tangent(&grad));
        let gn2 = tangent_inner(&x, &g, &g);
        if !(gn2 > 1e-30 * (1.0 + fx)) {
            break;
        }
        let mut t = opts.armijo_initial;
        let mut accepted = false;
        for _ in 0..60 {
            if let Some(c) = exp(&x, &(&g * -t)).ok().and_then(|c| fixed.project(&c).ok()) {
                let fc = pair_cost(&c, a, b);
                if fc <= fx - opts.armijo_slope * t * gn2 {
                    x = c;
                    fx = fc;
                    accepted = true;
                    break;
                }
            }
            t *= opts.armijo_shrink;
        }
        if !accepted {
            break;
        }
    }
    Ok(x)
}

fn max_generator_displacement(s: &Scenario, q: &ModelPoint) -> Result<f64, SolverError> {
    s.generators()
        .iter()
        .try_fold(0.0f64, |acc, g| Ok(acc.max(g.displacement(q)?)))
}

fn cyclic_projections(s: &Scenario, q: ModelPoint, rounds: usize) -> Result<ModelPoint, SolverError> {
    let tol = s.tolerances().fixedness * 1e-3;
    let mut q = q;
    for round in 0..rounds {
        let before = q.clone();
        for f in s.fixed_sets() {
            q = f.project(&q)?;
        }
        let moved = dist(&before, &q)?;
        if moved <= 1e-15 * (1.0 + q.magnitude()) || (round % 10 == 9 && max_generator_displacement(s, &q)? <= tol) {
            break;
        }
    }
    Ok(q)
}

/// Certified fixed point near a triangle with tiny sides.
fn recenter(s: &Scenario, st: &TriangleState, opts: &SolveOptions) -> Result<(ModelPoint, Recentering, f64), SolverError> {
    let tol = s.tolerances();
    let q = barycenter_with(&[st.x.clone(), st.y.clone(), st.z.clone()], &[1.0, 1.0, 1.0], tol)?;
    let (point, how) = match cartan_fixed_point_with(&s.generators(), &q, opts.recenter_cap, tol) {
        Ok(c) => (c, Recentering::Cartan),
        Err(_) => (cyclic_projections(s, q, opts.projection_rounds)?, Recentering::Projections),
    };
    let displacement = max_generator_displacement(s, &point)?;
    if displacement > tol.fixedness {
        return Err(SolverError::NotCertified { displacement });
    }
    Ok((point, how, displacement))
}

fn monitor_seed(s: &Scenario, iteration: usize) -> u64 {
    s.seed() ^ (iteration as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn monitor_at(s: &Scenario, st: &TriangleState) -> Result<MonitorRecord, SolverError> {
    let tol = s.tolerances();
    let center = barycenter_with(&[st.x.clone(), st.y.clone(), st.z.clone()], &[1.0, 1.0, 1.0], tol)?;
    let ttt = monitor_ttt(s, &center)?;
    let (_, good_point) = good_point_step(s, &center, monitor_seed(s, st.iteration))?;
    Ok(MonitorRecord {
        iteration: st.iteration,
        ttt,
        good_point,
    })
}

pub fn minimize_f(s: &Scenario) -> Result<SolverResult, SolverError> {
    minimize_f_with(s, &SolveOptions::default())
}

/// Cyclically replace each vertex by the minimizer of its two adjacent
/// squared sides within its fixed set.
///
/// Stops with `fixed-point` once `f <= fixed_energy (1 + scale^2)` and the
/// barycenter has been re-centered to a certified fixed point, with
/// `minimal-triangle` once `f` has dropped by less than `stall_relative`
/// relative over `stall_window` iterations, and with `iteration-cap`
/// otherwise.
pub fn minimize_f_with(s: &Scenario, opts: &SolveOptions) -> Result<SolverResult, SolverError> {
    let tol = *s.tolerances();
    let [fx, fy, fz] = s.fixed_sets();
    let [x0, y0, z0] = s.initial();
    let (mut x, mut y, mut z) = (fx.project(x0)?, fy.project(y0)?, fz.project(z0)?);
    let mut f = energy_f(&x, &y, &z)?;
    let mut history = vec![f];
    let mut monitors = Vec::new();
    let mut descent_violations = 0;
    let stride = opts.monitor_stride.max(1);
    let window = tol.stall_window.max(1);
    let mut status = Status::IterationCap;
    let mut iteration = 0;

    loop {
        let scale = x.magnitude().max(y.magnitude()).max(z.magnitude());
        if iteration % stride == 0 && monitors.len() < opts.max_monitors {
            let st = TriangleState::new(x.clone(), y.clone(), z.clone(), iteration)?;
            monitors.push(monitor_at(s, &st)?);
        }
        if f <= tol.fixed_energy * (1.0 + scale * scale) {
            status = Status::FixedPoint;
            break;
        }
        if iteration >= window {
            let old = history[iteration - window];
            if old - f <= tol.stall_relative * old {
                status = Status::MinimalTriangle;
                break;
            }
        }
        if iteration >= s.max_iter() {
            break;
        }
        iteration += 1;
        x = vertex_update(fx, &x, &y, &z, opts)?;
        y = vertex_update(fy, &y, &x, &z, opts)?;
        z = vertex_update(fz, &z, &x, &y, opts)?;
        let next = energy_f(&x, &y, &z)?;
        if next > f + 1e-12 * (1.0 + f) {
            descent_violations += 1;
        }
        f = next;
        history.push(f);
    }

    let final_state = TriangleState::new(x, y, z, iteration)?;
    let certificate = vertex_angle_certificate(&final_state, tol.degenerate_side).ok();
    let (fixed_point, recentering, fixed_displacement) = if status == Status::FixedPoint {
        let (p, how, d) = recenter(s, &final_state, opts)?;
        (Some(p), Some(how), Some(d))
    } else {
        (None, None, None)
    };
    Ok(SolverResult {
        status,
        final_state,
        fixed_point,
        fixed_displacement,
        recentering,
        certificate,
        monitors,
        f_history: history,
        descent_violations,
    })
}

/// Vertex angles and the fat flag; unavailable when a side is not longer
/// than `min_side`.
pub fn vertex_angle_certificate(st: &TriangleState, min_side: f64) -> Result<Certificate, SolverError> {
    let sides = [dist(&st.x, &st.y)?, dist(&st.y, &st.z)?, dist(&st.z, &st.x)?];
    if let Some(short) = sides.iter().find(|&&d| d <= min_side) {
        return Err(SolverError::CertificateUnavailable(format!(
            "side of length {short:e} is degenerate"
        )));
    }
    let angles = [
        angle_at(&st.x, &st.y, &st.z)?,
        angle_at(&st.y, &st.x, &st.z)?,
        angle_at(&st.z, &st.x, &st.y)?,
    ];
    let angle_sum: f64 = angles.iter().sum();
    Ok(Certificate {
        angles,
        fat: angles.iter().all(|&a| a > FRAC_PI_3),
        angle_sum,
        excess: angle_sum - PI,
        fat_epsilon: FRAC_PI_3 - angles.iter().copied().fold(f64::INFINITY, f64::min),
        side_range: (sides.iter().copied().fold(f64::INFINITY, f64::min), sides.iter().copied().fold(0.0, f64::max)),
    })
}

/// Orthonormal basis of the tangent space at `x`, as ambient columns.
fn tangent_frame(x: &ModelPoint) -> DMatrix<f64> {
    let n = x.coords().len();
    match x.model() {
        Model::Euclidean { .. } => DMatrix::identity(n, n),
        Model::Hyperboloid { .. } => {
            let mut cols: Vec<DVector<f64>> = Vec::new();
            for i in 1..n {
                let mut v = project_to_tangent(x, &DVector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 }));
                for c in &cols {
                    let proj = tangent_inner(x, &v, c);
                    v -= c * proj;
                }
                let norm = tangent_inner(x, &v, &v).max(0.0).sqrt();
                cols.push(v / norm);
            }
            DMatrix::from_columns(&cols)
        }
    }
}

/// Fixed vectors of `G_i`'s tangent action at a point it fixes, in the
/// coordinates of `frame`.
fn fixed_tangent_space(
    s: &Scenario,
    group: usize,
    x: &ModelPoint,
    frame: &DMatrix<f64>,
) -> Result<SubspaceBasis, SolverError> {
    let d = frame.ncols();
    let gens = &s.groups()[group];
    if gens.is_empty() {
        return Ok(SubspaceBasis::from_real(&DMatrix::identity(d, d), 1e-10)?);
    }
    let mut jframe = frame.clone();
    if !x.model().is_flat() {
        jframe.row_mut(0).neg_mut();
    }
    let mut stacked = DMatrix::zeros(d * gens.len(), d);
    for (i, g) in gens.iter().enumerate() {
        let a = jframe.transpose() * g.linear() * frame - DMatrix::identity(d, d);
        stacked.view_mut((i * d, 0), (d, d)).copy_from(&a);
    }
    let kernel = linalg::null_space(&stacked, 1e-9 * (1.0 + stacked.amax()));
    if kernel.ncols() == 0 {
        return Ok(SubspaceBasis::zero(d));
    }
    Ok(SubspaceBasis::from_real(&kernel, 1e-8)?)
}

/// At each vertex, the angle between the tangent vectors fixed by its two
/// subgroups: `G_1, G_2` at `x`, `G_1, G_3` at `y`, `G_2, G_3` at `z`.
/// Reported alongside the vertex angles; no inequality is asserted.
pub fn tangent_fixed_angles(s: &Scenario, st: &TriangleState) -> Result<[AngleReport; 3], SolverError> {
    let mut out = Vec::with_capacity(3);
    for (v, &(a, b)) in st.vertices().into_iter().zip(&PAIR_INDICES) {
        let frame = tangent_frame(v);
        let va = fixed_tangent_space(s, a, v, &frame)?;
        let vb = fixed_tangent_space(s, b, v, &frame)?;
        out.push(principal_angle(&va, &vb, INTERSECTION_TOL)?);
    }
    Ok(out.try_into().expect("three vertices"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::scenario::{scenario_generator, ScenarioKind, ScenarioParams};

    fn e(c: &[f64]) -> ModelPoint {
        Model::euclidean(c.len()).point(DVector::from_row_slice(c)).unwrap()
    }

    #[test]
    fn equilateral_is_not_fat() {
        let s = 3f64.sqrt();
        let st = TriangleState::new(e(&[0.0, 0.0]), e(&[1.0, 0.0]), e(&[0.5, s / 2.0]), 0).unwrap();
        let c = vertex_angle_certificate(&st, 1e-10).unwrap();
        for a in c.angles {
            assert!((a - FRAC_PI_3).abs() < 1e-12);
        }
        assert!(!c.fat);
        assert!(c.excess.abs() < 1e-12 && c.fat_epsilon.abs() < 1e-12);
        assert!((c.side_range.0 - 1.0).abs() < 1e-15 && (c.side_range.1 - 1.0).abs() < 1e-15);
        let right = TriangleState::new(e(&[0.0, 0.0]), e(&[4.0, 0.0]), e(&[0.0, 3.0]), 0).unwrap();
        let c = vertex_angle_certificate(&right, 1e-10).unwrap();
        assert!((c.fat_epsilon - (FRAC_PI_3 - 0.75f64.atan())).abs() < 1e-12);
        assert_eq!(c.side_range, (3.0, 5.0));
        let degenerate = TriangleState::new(e(&[0.0, 0.0]), e(&[0.0, 0.0]), e(&[1.0, 0.0]), 0).unwrap();
        assert!(matches!(
            vertex_angle_certificate(&degenerate, 1e-10),
            Err(SolverError::CertificateUnavailable(_))
        ));
    }

    #[test]
    fn mirrors_reach_the_planted_point() {
        for model in [
            Model::euclidean(2),
            Model::euclidean(5),
            Model::hyperboloid(2, 1.0).unwrap(),
            Model::hyperboloid(3, 2.0).unwrap(),
        ] {
            let params = ScenarioParams {
                model,
                ..ScenarioParams::default()
            };
            let s = scenario_generator(ScenarioKind::Mirrors, &params, 11).unwrap();
            let r = minimize_f(&s).unwrap();
            assert_eq!(r.status, Status::FixedPoint, "{model}");
            assert_eq!(r.descent_violations, 0);
            assert_eq!(r.monitor_violations(), 0);
            let q = r.fixed_point.unwrap();
            // three mirrors meet in a single point only up to dimension 3
            if model.dim() <= 3 {
                assert!(dist(&q, s.planted().unwrap()).unwrap() < 1e-6, "{model}");
            }
            assert!(r.fixed_displacement.unwrap() <= 1e-8);
        }
    }

    #[test]
    fn stress_stops_at_a_triangle() {
        for model in [Model::euclidean(2), Model::euclidean(3), Model::hyperboloid(3, 1.0).unwrap()] {
            let params = ScenarioParams {
                model,
                ..ScenarioParams::default()
            };
            let s = scenario_generator(ScenarioKind::Stress, &params, 2).unwrap();
            let r = minimize_f(&s).unwrap();
            assert_ne!(r.status, Status::FixedPoint, "{model}");
            assert!(r.fixed_point.is_none());
            assert!(r.final_state.f_value > 1e-3);
            assert_eq!(r.descent_violations, 0);
            let angles = tangent_fixed_angles(&s, &r.final_state).unwrap();
            for a in angles {
                assert!(a.angle.is_finite());
            }
        }
    }

    #[test]
    fn mirror_tangent_angles() {
        // in the plane, the two mirrors through x meet at the mirror angle
        let params = ScenarioParams {
            mirror_angle_deg: 50.0,
            ..ScenarioParams::default()
        };
        let s = scenario_generator(ScenarioKind::Mirrors, &params, 5).unwrap();
        let r = minimize_f(&s).unwrap();
        let angles = tangent_fixed_angles(&s, &r.final_state).unwrap();
        assert!((angles[0].angle - 50f64.to_radians()).abs() < 1e-9);
    }
}
