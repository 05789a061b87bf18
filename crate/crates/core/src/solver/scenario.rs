//! Scenarios: three finite groups of isometries with pairwise finite joins,
//! their fixed sets, the generating set `K`, and starting points.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{steinberg_generators, Ring, RingMatrix, TruncatedPoly};
use crate::geometry::{dist, fixed_subspace, GeodesicSubspace, Isometry, Model, ModelPoint};
use crate::linalg;
use crate::repangle::heisenberg_group;
use crate::tolerance::Tolerances;

use super::{SolverError, PAIR_INDICES, PAIR_LABELS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScenarioKind {
    /// Reflections in three mirrors through one hidden point.
    Mirrors,
    /// A finite orthogonal representation moved off the origin by a hidden
    /// translation.
    Coboundary,
    /// Steinberg generators acting by permutations on `R^n` for the degree
    /// one quotient `R` of the truncated ring.
    RepEmbedded,
    /// Mirrors bounding a triangle: the pairwise groups are finite but there
    /// is no common fixed point.
    Stress,
    /// Built by hand with [`Scenario::new`].
    Custom,
}

impl ScenarioKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::Mirrors => "mirrors",
            ScenarioKind::Coboundary => "coboundary",
            ScenarioKind::RepEmbedded => "rep-embedded",
            ScenarioKind::Stress => "stress",
            ScenarioKind::Custom => "custom",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioKind {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mirrors" => Ok(ScenarioKind::Mirrors),
            "coboundary" => Ok(ScenarioKind::Coboundary),
            "rep-embedded" => Ok(ScenarioKind::RepEmbedded),
            "stress" => Ok(ScenarioKind::Stress),
            _ => Err(SolverError::Parameter(format!(
                "unknown scenario {s:?}; expected mirrors, coboundary, rep-embedded or stress"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Scenario {
    kind: ScenarioKind,
    model: Model,
    groups: [Vec<Isometry>; 3],
    pair_groups: [Vec<Isometry>; 3],
    fixed_sets: [GeodesicSubspace; 3],
    k: Vec<Isometry>,
    initial: [ModelPoint; 3],
    planted: Option<ModelPoint>,
    tol: Tolerances,
    max_iter: usize,
    seed: u64,
}

impl Scenario {
    /// Enumerate the pairwise groups, their fixed sets and `K`.
    ///
    /// `groups[i]` generates `G_{i+1}`. Fails when a pairwise group exceeds
    /// `group_cap` elements or fixes nothing.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        kind: ScenarioKind,
        model: Model,
        groups: [Vec<Isometry>; 3],
        initial: [ModelPoint; 3],
        planted: Option<ModelPoint>,
        tol: Tolerances,
        max_iter: usize,
        group_cap: usize,
        seed: u64,
    ) -> Result<Self, SolverError> {
        for g in groups.iter().flatten() {
            if g.model() != model {
                return Err(SolverError::Parameter(format!("generator acts on {} not {model}", g.model())));
            }
        }
        for x in initial.iter().chain(planted.as_ref()) {
            if x.model() != model {
                return Err(SolverError::Parameter(format!("point lives in {} not {model}", x.model())));
            }
        }
        if max_iter == 0 {
            return Err(SolverError::Parameter("max_iter must be positive".into()));
        }
        let mut pair_groups: Vec<Vec<Isometry>> = Vec::with_capacity(3);
        let mut fixed_sets = Vec::with_capacity(3);
        for (label, &(a, b)) in PAIR_LABELS.iter().zip(&PAIR_INDICES) {
            let gens: Vec<Isometry> = groups[a].iter().chain(&groups[b]).cloned().collect();
            let elements = enumerate_group(model, &gens, group_cap).map_err(|e| match e {
                SolverError::GroupCap { cap, .. } => SolverError::GroupCap {
                    what: format!("G_{{{label}}}"),
                    cap,
                },
                other => other,
            })?;
            let fixed = fixed_subspace(model, &gens).map_err(|e| SolverError::EmptyFixedSet {
                pair: label.to_string(),
                reason: e.to_string(),
            })?;
            pair_groups.push(elements);
            fixed_sets.push(fixed);
        }
        let mut k: Vec<Isometry> = Vec::new();
        for g in pair_groups.iter().flatten() {
            let tol = 1e-8 * (1.0 + g.linear().amax());
            if !k.iter().any(|h| h.distance_to(g) <= tol) {
                k.push(g.clone());
            }
        }
        let pair_groups: [Vec<Isometry>; 3] = pair_groups.try_into().expect("three pairs");
        let fixed_sets: [GeodesicSubspace; 3] = fixed_sets.try_into().expect("three pairs");
        Ok(Self {
            kind,
            model,
            groups,
            pair_groups,
            fixed_sets,
            k,
            initial,
            planted,
            tol,
            max_iter,
            seed,
        })
    }

    pub fn kind(&self) -> ScenarioKind {
        self.kind
    }

    pub fn model(&self) -> Model {
        self.model
    }

    /// Generators of `G_1`, `G_2`, `G_3`.
    pub fn groups(&self) -> &[Vec<Isometry>; 3] {
        &self.groups
    }

    /// All generators of `G`.
    pub fn generators(&self) -> Vec<Isometry> {
        self.groups.iter().flatten().cloned().collect()
    }

    /// Elements of `G_{1,2}`, `G_{1,3}`, `G_{2,3}`.
    pub fn pair_groups(&self) -> &[Vec<Isometry>; 3] {
        &self.pair_groups
    }

    /// Fixed sets of `G_{1,2}`, `G_{1,3}`, `G_{2,3}`: where `x`, `y`, `z` live.
    pub fn fixed_sets(&self) -> &[GeodesicSubspace; 3] {
        &self.fixed_sets
    }

    /// `K = K_1 ∪ K_2 ∪ K_3`, the union of the pairwise groups.
    pub fn k(&self) -> &[Isometry] {
        &self.k
    }

    pub fn initial(&self) -> &[ModelPoint; 3] {
        &self.initial
    }

    /// A hidden common fixed point. For mirrors in dimension above 3 the
    /// common fixed set is larger and this is one point of it.
    pub fn planted(&self) -> Option<&ModelPoint> {
        self.planted.as_ref()
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn max_iter(&self) -> usize {
        self.max_iter
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter.max(1);
        self
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_initial(mut self, initial: [ModelPoint; 3]) -> Result<Self, SolverError> {
        if initial.iter().any(|x| x.model() != self.model) {
            return Err(SolverError::Parameter("initial points live in another model".into()));
        }
        self.initial = initial;
        Ok(self)
    }
}

fn probe_point(model: Model) -> ModelPoint {
    let v = DVector::from_fn(model.dim(), |i, _| 0.05 + 0.1 * ((i + 2) as f64).sqrt().fract());
    model.lift(&v).expect("dimension matches")
}

/// Elements of the group generated by `generators`, breadth first from the
/// identity. Two products are the same element when they agree on a probe
/// point and entrywise.
pub fn enumerate_group(model: Model, generators: &[Isometry], cap: usize) -> Result<Vec<Isometry>, SolverError> {
    let probe = probe_point(model);
    let mut elements = vec![Isometry::identity(model)];
    let mut images = vec![probe.clone()];
    let mut next = 0;
    while next < elements.len() {
        let g = elements[next].clone();
        next += 1;
        for s in generators {
            let h = s.compose(&g)?;
            let img = h.apply(&probe)?;
            let tol = 1e-8 * (1.0 + img.magnitude());
            let etol = 1e-8 * (1.0 + h.linear().amax());
            let seen = images
                .iter()
                .zip(&elements)
                .any(|(im, e)| dist(im, &img).is_ok_and(|d| d <= tol) && e.distance_to(&h) <= etol);
            if seen {
                continue;
            }
            if elements.len() >= cap {
                return Err(SolverError::GroupCap {
                    what: "the generators".into(),
                    cap,
                });
            }
            elements.push(h);
            images.push(img);
        }
    }
    Ok(elements)
}

/// Parameters of the generated scenarios. Fields a kind does not use are
/// ignored.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioParams {
    /// Ambient model for `mirrors` and `stress`; the other kinds are
    /// Euclidean of the dimension their construction dictates.
    pub model: Model,
    /// Dihedral angle between each pair of mirrors, in degrees.
    pub mirror_angle_deg: f64,
    /// Prime of the Heisenberg group behind `coboundary`.
    pub heisenberg_p: u32,
    /// `(n, k, p)` of the Steinberg generators behind `rep-embedded`.
    pub steinberg: (usize, usize, u32),
    /// Distance of the hidden point (or hidden transformation) from the origin.
    pub offset: f64,
    /// Radius of the box the starting points are drawn from.
    pub spread: f64,
    /// Inradius of the Euclidean stress triangle.
    pub size: f64,
    pub tol: Tolerances,
    pub max_iter: usize,
    pub group_cap: usize,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        Self {
            model: Model::euclidean(2),
            mirror_angle_deg: 70.0,
            heisenberg_p: 5,
            steinberg: (3, 1, 2),
            offset: 1.0,
            spread: 2.0,
            size: 1.0,
            tol: Tolerances::DEFAULT,
            max_iter: 20_000,
            group_cap: 5_000,
        }
    }
}

fn gaussian(rng: &mut ChaCha8Rng, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal))
}

fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    g.qr().q()
}

fn random_direction(rng: &mut ChaCha8Rng, n: usize) -> DVector<f64> {
    loop {
        let g = gaussian(rng, n);
        let norm = g.norm();
        if norm > 1e-6 {
            return g / norm;
        }
    }
}

/// Unit normals in `R^dim` with pairwise angle `theta`; in the plane they
/// sit at angles `0, theta, 2 theta`.
fn mirror_normals(dim: usize, theta: f64, rng: &mut ChaCha8Rng) -> Result<Vec<DVector<f64>>, SolverError> {
    if dim == 2 {
        return Ok((0..3)
            .map(|i| {
                let a = i as f64 * theta;
                DVector::from_row_slice(&[a.cos(), a.sin()])
            })
            .collect());
    }
    let c = theta.cos();
    let gram = DMatrix::from_fn(3, 3, |i, j| if i == j { 1.0 } else { c });
    let chol = gram
        .cholesky()
        .ok_or_else(|| SolverError::Parameter("mirror angle must lie strictly between 0 and 120 degrees".into()))?;
    let l = chol.l();
    let q = random_orthogonal(rng, dim);
    Ok((0..3)
        .map(|i| {
            let u = DVector::from_fn(dim, |r, _| if r < 3 { l[(i, r)] } else { 0.0 });
            &q * u
        })
        .collect())
}

/// A Lorentz transformation moving the origin to distance `offset`.
fn hiding_lorentz(model: Model, offset: f64, rng: &mut ChaCha8Rng) -> Result<Isometry, SolverError> {
    let c = model.curvature_scale().expect("hyperboloid");
    let mut l = Isometry::boost(model, 1, offset * c)?;
    if model.dim() >= 2 {
        let r = Isometry::hyperboloid_rotation(model, 1, 2, rng.random_range(0.0..std::f64::consts::TAU))?;
        l = r.compose(&l)?;
    }
    Ok(l)
}

fn initial_points(
    model: Model,
    spread: f64,
    rng: &mut ChaCha8Rng,
    hide: impl Fn(ModelPoint) -> Result<ModelPoint, SolverError>,
) -> Result<[ModelPoint; 3], SolverError> {
    let pts = (0..3)
        .map(|_| hide(model.random_point(rng, spread)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(pts.try_into().expect("three points"))
}

fn check_params(params: &ScenarioParams) -> Result<(), SolverError> {
    let finite_pos = |v: f64| v.is_finite() && v > 0.0;
    if !(params.offset.is_finite() && params.offset >= 0.0) {
        return Err(SolverError::Parameter(format!("offset must be nonnegative, got {}", params.offset)));
    }
    if !finite_pos(params.spread) || !finite_pos(params.size) {
        return Err(SolverError::Parameter("spread and size must be positive".into()));
    }
    if params.max_iter == 0 || params.group_cap == 0 {
        return Err(SolverError::Parameter("max_iter and group_cap must be positive".into()));
    }
    Ok(())
}

/// Build a scenario of the given kind; deterministic in `seed`.
pub fn scenario_generator(kind: ScenarioKind, params: &ScenarioParams, seed: u64) -> Result<Scenario, SolverError> {
    check_params(params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (model, groups, initial, planted) = match kind {
        ScenarioKind::Mirrors => mirrors(params, &mut rng)?,
        ScenarioKind::Stress => stress(params, &mut rng)?,
        ScenarioKind::Coboundary => coboundary(params, &mut rng)?,
        ScenarioKind::RepEmbedded => rep_embedded(params, &mut rng)?,
        ScenarioKind::Custom => {
            return Err(SolverError::Parameter("custom scenarios are built with Scenario::new".into()));
        }
    };
    Scenario::new(
        kind,
        model,
        groups,
        initial,
        planted,
        params.tol,
        params.max_iter,
        params.group_cap,
        seed,
    )
}

type Parts = (Model, [Vec<Isometry>; 3], [ModelPoint; 3], Option<ModelPoint>);

fn mirrors(params: &ScenarioParams, rng: &mut ChaCha8Rng) -> Result<Parts, SolverError> {
    let model = params.model;
    let dim = model.dim();
    if dim < 2 {
        return Err(SolverError::Parameter("mirrors need dimension at least 2".into()));
    }
    let deg = params.mirror_angle_deg;
    if !(deg > 0.0 && deg < 180.0) {
        return Err(SolverError::Parameter(format!("mirror angle must lie in (0, 180) degrees, got {deg}")));
    }
    let normals = mirror_normals(dim, deg.to_radians(), rng)?;
    match model {
        Model::Euclidean { .. } => {
            let v = random_direction(rng, dim) * params.offset;
            let groups = normals
                .iter()
                .map(|n| Isometry::euclidean_reflection(n, &v).map(|r| vec![r]))
                .collect::<Result<Vec<_>, _>>()?;
            let shift = v.clone();
            let initial = initial_points(model, params.spread, rng, |p| {
                Ok(model.point(p.coords() + &shift)?)
            })?;
            Ok((model, groups.try_into().expect("three"), initial, Some(model.point(v)?)))
        }
        Model::Hyperboloid { .. } => {
            let l = hiding_lorentz(model, params.offset, rng)?;
            let groups = normals
                .iter()
                .map(|u| {
                    let n = DVector::from_fn(dim + 1, |i, _| if i == 0 { 0.0 } else { u[i - 1] });
                    Isometry::hyperboloid_reflection(model, &(l.linear() * n)).map(|r| vec![r])
                })
                .collect::<Result<Vec<_>, _>>()?;
            let initial = initial_points(model, params.spread, rng, |p| Ok(l.apply(&p)?))?;
            let planted = l.apply(&model.origin())?;
            Ok((model, groups.try_into().expect("three"), initial, Some(planted)))
        }
    }
}

fn stress(params: &ScenarioParams, rng: &mut ChaCha8Rng) -> Result<Parts, SolverError> {
    let model = params.model;
    let dim = model.dim();
    if dim < 2 {
        return Err(SolverError::Parameter("stress scenarios need dimension at least 2".into()));
    }
    match model {
        Model::Euclidean { .. } => {
            // sides of an equilateral triangle: pairwise dihedral angle 60 degrees
            let q = random_orthogonal(rng, dim);
            let v = random_direction(rng, dim) * params.offset;
            let groups = (0..3)
                .map(|i| {
                    let a = std::f64::consts::FRAC_PI_2 + i as f64 * 2.0 * std::f64::consts::FRAC_PI_3;
                    let n = &q * DVector::from_fn(dim, |r, _| match r {
                        0 => a.cos(),
                        1 => a.sin(),
                        _ => 0.0,
                    });
                    let on = &v + &n * params.size;
                    Isometry::euclidean_reflection(&n, &on).map(|r| vec![r])
                })
                .collect::<Result<Vec<_>, _>>()?;
            let shift = v.clone();
            let initial = initial_points(model, params.spread, rng, |p| Ok(model.point(p.coords() + &shift)?))?;
            Ok((model, groups.try_into().expect("three"), initial, None))
        }
        Model::Hyperboloid { .. } => {
            // geodesic triangle with all angles pi/4
            let a = std::f64::consts::FRAC_PI_4.cos();
            let gram = DMatrix::from_fn(3, 3, |i, j| if i == j { 1.0 } else { -a });
            let (vals, vecs) = linalg::symmetric_eigen(&gram);
            let l = hiding_lorentz(model, params.offset, rng)?;
            let groups = (0..3)
                .map(|i| {
                    let n = DVector::from_fn(dim + 1, |r, _| if r < 3 { vals[r].abs().sqrt() * vecs[(i, r)] } else { 0.0 });
                    Isometry::hyperboloid_reflection(model, &(l.linear() * n)).map(|r| vec![r])
                })
                .collect::<Result<Vec<_>, _>>()?;
            let initial = initial_points(model, params.spread, rng, |p| Ok(l.apply(&p)?))?;
            Ok((model, groups.try_into().expect("three"), initial, None))
        }
    }
}

/// Orthonormal basis of the vectors with zero coordinate sum.
fn helmert(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n - 1, |i, j| {
        let m = j + 1;
        let s = ((m * (m + 1)) as f64).sqrt();
        if i < m {
            1.0 / s
        } else if i == m {
            -(m as f64) / s
        } else {
            0.0
        }
    })
}

fn permutation_matrix(perm: &[usize]) -> DMatrix<f64> {
    let n = perm.len();
    let mut m = DMatrix::zeros(n, n);
    for (j, &i) in perm.iter().enumerate() {
        m[(i, j)] = 1.0;
    }
    m
}

fn euclidean_only(params: &ScenarioParams, what: &str) -> Result<(), SolverError> {
    if params.model.is_flat() {
        Ok(())
    } else {
        Err(SolverError::Parameter(format!("{what} scenarios are Euclidean")))
    }
}

fn coboundary(params: &ScenarioParams, rng: &mut ChaCha8Rng) -> Result<Parts, SolverError> {
    euclidean_only(params, "coboundary")?;
    let p = params.heisenberg_p;
    if p > 7 {
        return Err(SolverError::Parameter(format!("Heisenberg prime {p} is too large; use p <= 7")));
    }
    let table = heisenberg_group(p)?;
    let order = table.order();
    let ix = table.generator_index("x").expect("x");
    let iy = table.generator_index("y").expect("y");
    let (x, y) = (table.generators()[ix].id, table.generators()[iy].id);
    let z = table.mul(table.mul(x, y), table.mul(table.inverse(x), table.inverse(y)));
    // regular representation on the functions with zero sum, where only the
    // planted point is fixed by G_{1,2} = G
    let h = helmert(order);
    let dim = order - 1;
    let model = Model::euclidean(dim);
    let v = random_direction(rng, dim) * params.offset;
    let groups = [x, y, z]
        .iter()
        .map(|&g| {
            let perm: Vec<usize> = (0..order).map(|e| table.mul(g, e)).collect();
            let a = h.transpose() * permutation_matrix(&perm) * &h;
            Isometry::about(a, &v).map(|r| vec![r])
        })
        .collect::<Result<Vec<_>, _>>()?;
    let shift = v.clone();
    let initial = initial_points(model, params.spread, rng, |q| Ok(model.point(q.coords() + &shift)?))?;
    Ok((model, groups.try_into().expect("three"), initial, Some(model.point(v)?)))
}

fn poly_index(pool: &HashMap<TruncatedPoly, usize>, r: &TruncatedPoly) -> usize {
    pool[r]
}

fn rep_embedded(params: &ScenarioParams, rng: &mut ChaCha8Rng) -> Result<Parts, SolverError> {
    euclidean_only(params, "rep-embedded")?;
    let (n, k, p) = params.steinberg;
    let gens = steinberg_generators(n, k, p, 2 * n)?;
    let quotient = Ring::new(p, k, 1)?;
    let pool = quotient.degree_one_pool();
    let q = pool.len();
    let points = (q as u128).checked_pow(n as u32).filter(|&v| v <= 256).ok_or_else(|| {
        SolverError::Parameter(format!("R^n has {q}^{n} points; the permutation action is capped at 256"))
    })? as usize;
    let index: HashMap<TruncatedPoly, usize> = pool.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
    let vectors: Vec<Vec<usize>> = (0..points)
        .map(|mut idx| {
            (0..n)
                .map(|_| {
                    let d = idx % q;
                    idx /= q;
                    d
                })
                .collect()
        })
        .collect();
    let act = |m: &RingMatrix| -> Result<Vec<usize>, SolverError> {
        let m = m.truncate(1)?;
        vectors
            .iter()
            .map(|v| {
                let mut out = 0;
                for i in (0..n).rev() {
                    let mut acc = quotient.zero();
                    for (j, &vj) in v.iter().enumerate() {
                        acc = acc.add(&m.get(i, j).mul(&pool[vj])?)?;
                    }
                    out = out * q + poly_index(&index, &acc);
                }
                Ok(out)
            })
            .collect()
    };
    let model = Model::euclidean(points);
    let v = random_direction(rng, points) * params.offset;
    let mut groups: Vec<Vec<Isometry>> = Vec::with_capacity(3);
    for group in &gens.groups {
        let isos = group
            .iter()
            .map(|(m, _)| Ok(Isometry::about(permutation_matrix(&act(m)?), &v)?))
            .collect::<Result<Vec<_>, SolverError>>()?;
        groups.push(isos);
    }
    let shift = v.clone();
    let initial = initial_points(model, params.spread, rng, |x| Ok(model.point(x.coords() + &shift)?))?;
    Ok((model, groups.try_into().expect("three"), initial, None))
}

/// Deterministic byte encoding of a scenario: kind, model, seed, caps,
/// generator matrices, starting points and the planted point.
pub fn canonical_bytes(s: &Scenario) -> Vec<u8> {
    let mut out = Vec::new();
    let put_f = |out: &mut Vec<u8>, v: f64| out.extend_from_slice(&v.to_bits().to_le_bytes());
    out.extend_from_slice(s.kind.as_str().as_bytes());
    out.push(0);
    out.extend_from_slice(&(s.model.dim() as u64).to_le_bytes());
    put_f(&mut out, s.model.curvature_scale().unwrap_or(0.0));
    out.extend_from_slice(&s.seed.to_le_bytes());
    out.extend_from_slice(&(s.max_iter as u64).to_le_bytes());
    for group in &s.groups {
        out.extend_from_slice(&(group.len() as u64).to_le_bytes());
        for g in group {
            for v in g.linear().iter().chain(g.translation().iter()) {
                put_f(&mut out, *v);
            }
        }
    }
    for x in s.initial.iter().chain(s.planted.as_ref()) {
        for v in x.coords().iter() {
            put_f(&mut out, *v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn helmert_is_orthonormal_and_sums_to_zero() {
        let h = helmert(7);
        assert!((h.transpose() * &h - DMatrix::identity(6, 6)).amax() < 1e-14);
        assert!((DMatrix::from_element(1, 7, 1.0) * &h).amax() < 1e-14);
    }

    #[test]
    fn dihedral_orders() {
        // mirrors at 60 degrees generate a dihedral group of order 6
        let m = Model::euclidean(2);
        let a = Isometry::euclidean_reflection(&DVector::from_row_slice(&[1.0, 0.0]), &DVector::zeros(2)).unwrap();
        let t = std::f64::consts::FRAC_PI_3;
        let b = Isometry::euclidean_reflection(&DVector::from_row_slice(&[t.cos(), t.sin()]), &DVector::zeros(2)).unwrap();
        assert_eq!(enumerate_group(m, &[a.clone(), b], 100).unwrap().len(), 6);
        // parallel mirrors generate an infinite group
        let c = Isometry::euclidean_reflection(&DVector::from_row_slice(&[1.0, 0.0]), &DVector::from_row_slice(&[1.0, 0.0])).unwrap();
        assert!(matches!(enumerate_group(m, &[a, c], 100), Err(SolverError::GroupCap { cap: 100, .. })));
    }

    #[test]
    fn generated_kinds() {
        let base = ScenarioParams::default();
        let s = scenario_generator(ScenarioKind::Mirrors, &base, 3).unwrap();
        // 70 degree mirrors: rotation by 140 degrees has order 18
        assert_eq!(s.pair_groups()[0].len(), 36);
        let planted = s.planted().unwrap();
        for g in s.generators() {
            assert!(g.displacement(planted).unwrap() < 1e-12);
        }
        let cob = scenario_generator(
            ScenarioKind::Coboundary,
            &ScenarioParams {
                heisenberg_p: 3,
                ..base.clone()
            },
            1,
        )
        .unwrap();
        assert_eq!(cob.model().dim(), 26);
        assert_eq!(cob.pair_groups()[0].len(), 27);
        assert_eq!(cob.pair_groups()[1].len(), 9);
        assert_eq!(cob.fixed_sets()[0].dim(), 0);
        let rep = scenario_generator(ScenarioKind::RepEmbedded, &base, 1).unwrap();
        assert_eq!(rep.model().dim(), 64);
        assert_eq!(rep.pair_groups()[0].len(), 8);
        assert!(scenario_generator(ScenarioKind::Coboundary, &ScenarioParams {
            model: Model::hyperboloid(2, 1.0).unwrap(),
            ..base
        }, 1)
        .is_err());
    }

    #[test]
    fn fixed_seed_fixed_bytes() {
        let params = ScenarioParams {
            model: Model::hyperboloid(3, 0.5).unwrap(),
            ..ScenarioParams::default()
        };
        for kind in [ScenarioKind::Mirrors, ScenarioKind::Stress] {
            let a = canonical_bytes(&scenario_generator(kind, &params, 17).unwrap());
            let b = canonical_bytes(&scenario_generator(kind, &params, 17).unwrap());
            let c = canonical_bytes(&scenario_generator(kind, &params, 18).unwrap());
            assert_eq!(a, b);
            assert_ne!(a, c);
        }
    }
}
