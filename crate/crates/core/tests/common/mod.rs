//! Independent reference computations used by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet, VecDeque};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use stfix::algebra::{ElementId, GroupTable, TruncatedPoly};

/// Noncommutative polynomial as a map from words to coefficients mod `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordPoly {
    pub p: i64,
    pub max_degree: usize,
    pub terms: BTreeMap<Vec<usize>, i64>,
}

impl WordPoly {
    pub fn from_lib(q: &TruncatedPoly) -> Self {
        let ring = q.ring();
        let terms = q
            .terms()
            .iter()
            .map(|(m, c)| (m.letters(ring.vars()), *c as i64))
            .collect();
        Self {
            p: ring.modulus() as i64,
            max_degree: ring.max_degree(),
            terms,
        }
    }

    fn clean(mut self) -> Self {
        self.terms.retain(|_, c| {
            *c = c.rem_euclid(self.p);
            *c != 0
        });
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            *terms.entry(w.clone()).or_insert(0) += c;
        }
        Self { terms, ..self.clone() }.clean()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<Vec<usize>, i64> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if a.len() + b.len() > self.max_degree {
                    continue;
                }
                let mut w = a.clone();
                w.extend_from_slice(b);
                *terms.entry(w).or_insert(0) += ca * cb % self.p;
            }
        }
        Self { terms, ..self.clone() }.clean()
    }
}

/// Subgroup generated by `ids`, by breadth-first search on the table.
pub fn closure(table: &GroupTable, ids: &[ElementId]) -> Vec<ElementId> {
    let mut seen: HashSet<ElementId> = HashSet::from([0]);
    let mut queue: VecDeque<ElementId> = VecDeque::from([0]);
    while let Some(g) = queue.pop_front() {
        for &h in ids {
            let gh = table.mul(g, h);
            if seen.insert(gh) {
                queue.push_back(gh);
            }
        }
    }
    let mut out: Vec<ElementId> = seen.into_iter().collect();
    out.sort_unstable();
    out
}

/// Averaging projector of `subgroup` in the left regular representation,
/// as a dense real matrix.
pub fn regular_projector(table: &GroupTable, subgroup: &[ElementId]) -> DMatrix<f64> {
    let n = table.order();
    let mut p = DMatrix::zeros(n, n);
    let w = 1.0 / subgroup.len() as f64;
    for &h in subgroup {
        for g in 0..n {
            p[(table.mul(h, g), g)] += w;
        }
    }
    p
}

/// Largest singular value, from the top eigenvalue of `A^T A`.
pub fn operator_norm(a: &DMatrix<f64>) -> f64 {
    let ata = a.transpose() * a;
    let eig = SymmetricEigen::new(ata);
    eig.eigenvalues.iter().copied().fold(0.0, f64::max).max(0.0).sqrt()
}

/// Cosine of the angle between the fixed spaces of `h1` and `h2` in the
/// regular representation, `|P1 P2 - P12|` with `P12` the projector of the
/// joint subgroup.
pub fn dense_cosine(table: &GroupTable, h1: &[ElementId], h2: &[ElementId]) -> f64 {
    let mut both = h1.to_vec();
    both.extend_from_slice(h2);
    let joint = closure(table, &both);
    let p1 = regular_projector(table, h1);
    let p2 = regular_projector(table, h2);
    let p12 = regular_projector(table, &joint);
    operator_norm(&(p1 * p2 - p12))
}

/// Angles of a geodesic triangle with side lengths `a, b, c` in constant
/// curvature `-curv^2` (hyperbolic law of cosines), or flat when `curv = 0`.
pub fn triangle_angles(a: f64, b: f64, c: f64, curv: f64) -> [f64; 3] {
    let angle = |opp: f64, s1: f64, s2: f64| -> f64 {
        let cos = if curv == 0.0 {
            (s1 * s1 + s2 * s2 - opp * opp) / (2.0 * s1 * s2)
        } else {
            let (x, y, z) = (curv * s1, curv * s2, curv * opp);
            (x.cosh() * y.cosh() - z.cosh()) / (x.sinh() * y.sinh())
        };
        cos.clamp(-1.0, 1.0).acos()
    };
    [angle(a, b, c), angle(b, a, c), angle(c, a, b)]
}

/// Minimize `f` over the plane by repeatedly refining a grid around the
/// best node.
pub fn grid_argmin_2d(f: impl Fn(f64, f64) -> f64, center: (f64, f64), half_width: f64, rounds: usize) -> (f64, f64) {
    let steps = 20i32;
    let (mut cx, mut cy) = center;
    let mut h = half_width;
    for _ in 0..rounds {
        let mut best = (f64::INFINITY, cx, cy);
        for i in -steps..=steps {
            for j in -steps..=steps {
                let x = cx + h * i as f64 / steps as f64;
                let y = cy + h * j as f64 / steps as f64;
                let v = f(x, y);
                if v < best.0 {
                    best = (v, x, y);
                }
            }
        }
        cx = best.1;
        cy = best.2;
        h *= 2.0 / steps as f64;
    }
    (cx, cy)
}

/// Fixed point of the affine map `x -> A x + b` when `I - A` is invertible.
pub fn affine_fixed_point(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let n = a.nrows();
    (DMatrix::identity(n, n) - a).lu().solve(b).expect("isolated fixed point")
}

/// Distance from `x` to the segment `[a, b]` in the plane or space.
pub fn segment_distance(x: &DVector<f64>, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let ab = b - a;
    let len = ab.norm_squared();
    let t = if len == 0.0 { 0.0 } else { ((x - a).dot(&ab) / len).clamp(0.0, 1.0) };
    (x - (a + ab * t)).norm()
}

/// Center of the smallest disc containing three planar points.
pub fn enclosing_center_3(p: [&DVector<f64>; 3]) -> DVector<f64> {
    for i in 0..3 {
        let (a, b, c) = (p[i], p[(i + 1) % 3], p[(i + 2) % 3]);
        let m = (a + b) / 2.0;
        if (c - &m).norm() <= (a - b).norm() / 2.0 + 1e-12 {
            return m;
        }
    }
    let (a, b, c) = (p[0], p[1], p[2]);
    let d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]));
    let (a2, b2, c2) = (a.norm_squared(), b.norm_squared(), c.norm_squared());
    DVector::from_row_slice(&[
        (a2 * (b[1] - c[1]) + b2 * (c[1] - a[1]) + c2 * (a[1] - b[1])) / d,
        (a2 * (c[0] - b[0]) + b2 * (a[0] - c[0]) + c2 * (b[0] - a[0])) / d,
    ])
}
