//! The energies `f` and `h`, `diam(K x)`, and the checked inequalities of
//! the good-point argument.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{circumcenter_with, dist, exp, Isometry, ModelPoint};

use super::scenario::Scenario;
use super::SolverError;

/// `d(x,y)^2 + d(y,z)^2 + d(z,x)^2`.
pub fn energy_f(x: &ModelPoint, y: &ModelPoint, z: &ModelPoint) -> Result<f64, SolverError> {
    let (a, b, c) = (dist(x, y)?, dist(y, z)?, dist(z, x)?);
    Ok(a * a + b * b + c * c)
}

/// Sum over the three pairwise groups of the squared distance from `x` to
/// the group's fixed set.
pub fn energy_h(s: &Scenario, x: &ModelPoint) -> Result<f64, SolverError> {
    s.fixed_sets().iter().try_fold(0.0, |acc, f| {
        let d = f.distance(x)?;
        Ok(acc + d * d)
    })
}

fn max_displacement(elements: &[Isometry], x: &ModelPoint) -> Result<f64, SolverError> {
    elements.iter().try_fold(0.0f64, |acc, g| Ok(acc.max(g.displacement(x)?)))
}

/// `max_{k in K} d(x, k x)`.
pub fn diam_k(s: &Scenario, x: &ModelPoint) -> Result<f64, SolverError> {
    max_displacement(s.k(), x)
}

/// Both sides of `h(x) >= diam(K x)^2 / 4` and of `h(x) <= 3 diam(K x)^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TttRecord {
    pub h: f64,
    pub diam: f64,
    pub lower: f64,
    pub upper: f64,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

impl TttRecord {
    pub fn holds(&self) -> bool {
        self.lower_holds && self.upper_holds
    }
}

fn slack_tol(s: &Scenario, scale: f64) -> f64 {
    s.tolerances().monitor_slack * (1.0 + scale)
}

pub fn monitor_ttt(s: &Scenario, x: &ModelPoint) -> Result<TttRecord, SolverError> {
    let h = energy_h(s, x)?;
    let diam = diam_k(s, x)?;
    let lower = 0.25 * diam * diam;
    let upper = 3.0 * diam * diam;
    let tol = slack_tol(s, h + diam * diam);
    Ok(TttRecord {
        h,
        diam,
        lower,
        upper,
        lower_holds: h >= lower - tol,
        upper_holds: h <= upper + tol,
    })
}

/// Outcome of one good-point search from `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct GoodPointRecord {
    pub applied: bool,
    pub diam_before: f64,
    pub diam_after: f64,
    pub h_before: f64,
    pub h_after: f64,
    /// `h(y) <= h(x) / 2`; vacuous when the step is not applied.
    pub halving_holds: bool,
    /// `h(y) <= 3 diam(K y)^2` at the returned point.
    pub upper_holds: bool,
    /// Which candidate won: `circumcenter`, `projection`, `alternating` or `sample`.
    pub source: &'static str,
}

impl GoodPointRecord {
    pub fn holds(&self) -> bool {
        self.halving_holds && self.upper_holds
    }
}

/// Look for `y` with `diam(K y) <= diam(K x) / 5` among the circumcenters of
/// the three pairwise orbits of `x`, the projections of `x` onto the fixed
/// sets, a short run of cyclic projections, and seeded samples around `x`.
/// Returns `x` itself when nothing qualifies.
pub fn good_point_step(s: &Scenario, x: &ModelPoint, seed: u64) -> Result<(ModelPoint, GoodPointRecord), SolverError> {
    let tol = s.tolerances();
    let diam_before = diam_k(s, x)?;
    let h_before = energy_h(s, x)?;
    let mut candidates: Vec<(ModelPoint, &'static str)> = Vec::new();
    if diam_before > 0.0 {
        for group in s.pair_groups() {
            let orbit: Vec<ModelPoint> = group.iter().map(|g| g.apply(x)).collect::<Result<_, _>>()?;
            if let Ok((c, _)) = circumcenter_with(&orbit, tol) {
                candidates.push((c, "circumcenter"));
            }
        }
        for f in s.fixed_sets() {
            if let Ok(p) = f.project(x) {
                candidates.push((p, "projection"));
            }
        }
        let mut q = Some(x.clone());
        for _ in 0..25 {
            q = q.and_then(|q| s.fixed_sets().iter().try_fold(q, |q, f| f.project(&q).ok()));
        }
        if let Some(q) = q {
            candidates.push((q, "alternating"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for shrink in [1.0, 0.5, 0.25, 0.125] {
            for _ in 0..4 {
                let u = x.random_unit_tangent(&mut rng) * (shrink * diam_before * rng.random_range(0.0..1.0));
                if let Ok(y) = exp(x, &u) {
                    candidates.push((y, "sample"));
                }
            }
        }
    }
    let mut best: Option<(ModelPoint, f64, &'static str)> = None;
    for (y, source) in candidates {
        let d = diam_k(s, &y)?;
        if best.as_ref().is_none_or(|b| d < b.1) {
            best = Some((y, d, source));
        }
    }
    let (y, applied, source) = match best {
        Some((y, d, source)) if d <= diam_before / 5.0 => (y, true, source),
        _ => (x.clone(), false, "none"),
    };
    let after = monitor_ttt(s, &y)?;
    let halving_holds = !applied || after.h <= 0.5 * h_before + slack_tol(s, h_before);
    Ok((
        y,
        GoodPointRecord {
            applied,
            diam_before,
            diam_after: after.diam,
            h_before,
            h_after: after.h,
            halving_holds,
            upper_holds: after.upper_holds,
            source,
        },
    ))
}

/// Monitors evaluated at one point during a solver run.
#[derive(Clone, Debug, PartialEq)]
pub struct MonitorRecord {
    pub iteration: usize,
    pub ttt: TttRecord,
    pub good_point: GoodPointRecord,
}

impl MonitorRecord {
    pub fn holds(&self) -> bool {
        self.ttt.holds() && self.good_point.holds()
    }
}

/// `(ttt)` and the upper bound at `samples` points drawn within `radius` of
/// the planted point, or of the first starting point when nothing is planted.
pub fn monitor_sweep(s: &Scenario, samples: usize, radius: f64, seed: u64) -> Result<Vec<TttRecord>, SolverError> {
    let center = s.planted().unwrap_or(&s.initial()[0]).clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let u = center.random_unit_tangent(&mut rng) * rng.random_range(0.0..radius);
            let x = exp(&center, &u)?;
            monitor_ttt(s, &x)
        })
        .collect()
}
