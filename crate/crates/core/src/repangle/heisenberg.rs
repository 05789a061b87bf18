//! The Heisenberg group over F_p and its complete list of irreducibles.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::algebra::{bfs_closure, elementary, is_prime, ElementId, GroupTable, Ring, DEFAULT_CAP};

use super::angles::irrep_angle;
use super::representation::{CMatrix, Representation};
use super::subspace::AngleReport;
use super::RepError;

/// Upper unitriangular 3x3 matrices over F_p, generated by `x = x_{1,2}(1)`
/// and `y = x_{2,3}(1)`.
pub fn heisenberg_group(p: u32) -> Result<GroupTable, RepError> {
    if !is_prime(p) {
        return Err(RepError::Input(format!("{p} is not prime")));
    }
    let ring = Ring::new(p, 0, 3)?;
    let one = ring.one();
    Ok(bfs_closure(
        vec![
            (elementary(3, 1, 2, &one)?, "x".into()),
            (elementary(3, 2, 3, &one)?, "y".into()),
        ],
        DEFAULT_CAP,
    )?)
}

#[derive(Debug)]
pub struct HeisenbergFamily {
    pub p: u32,
    pub group: Arc<GroupTable>,
    /// `<x>`
    pub x_subgroup: Vec<ElementId>,
    /// `<y>`
    pub y_subgroup: Vec<ElementId>,
    /// The `p^2` characters, indexed `a * p + b`, then the `p - 1`
    /// representations of dimension `p`.
    pub irreps: Vec<Representation>,
}

fn root_of_unity(p: u32, e: u64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (e % p as u64) as f64 / p as f64)
}

/// All irreducible representations of the Heisenberg group.
///
/// Characters send `x -> w^a`, `y -> w^b`. The remaining ones act on C^p
/// with `x` the cyclic shift `e_i -> e_{i+1}` and `y = diag(eta^i)` for each
/// nontrivial p-th root of unity `eta`.
pub fn heisenberg_irreps(p: u32) -> Result<HeisenbergFamily, RepError> {
    let group = Arc::new(heisenberg_group(p)?);
    let (ix, iy) = (
        group.generator_index("x").expect("x"),
        group.generator_index("y").expect("y"),
    );
    let x_subgroup = group.generator_subgroup(&[ix]);
    let y_subgroup = group.generator_subgroup(&[iy]);
    let pu = p as usize;

    let mut irreps = Vec::with_capacity(pu * pu + pu - 1);
    for a in 0..p as u64 {
        for b in 0..p as u64 {
            let mut gens = vec![CMatrix::zeros(1, 1); 2];
            gens[ix][(0, 0)] = root_of_unity(p, a);
            gens[iy][(0, 0)] = root_of_unity(p, b);
            irreps.push(Representation::explicit(group.clone(), gens, format!("chi({a},{b})"))?);
        }
    }
    let mut shift = CMatrix::zeros(pu, pu);
    for i in 0..pu {
        shift[((i + 1) % pu, i)] = Complex64::new(1.0, 0.0);
    }
    for s in 1..p as u64 {
        let diag = CMatrix::from_fn(pu, pu, |r, c| {
            if r == c {
                root_of_unity(p, s * r as u64)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let mut gens = vec![CMatrix::zeros(pu, pu); 2];
        gens[ix] = shift.clone();
        gens[iy] = diag;
        irreps.push(Representation::explicit(group.clone(), gens, format!("rho({s})"))?);
    }
    Ok(HeisenbergFamily {
        p,
        group,
        x_subgroup,
        y_subgroup,
        irreps,
    })
}

impl HeisenbergFamily {
    pub fn irrep_angles(&self) -> Result<Vec<AngleReport>, RepError> {
        self.irreps
            .iter()
            .map(|r| irrep_angle(r, &self.x_subgroup, &self.y_subgroup))
            .collect()
    }

    /// Smallest angle over the irreducibles where it is not degenerate.
    pub fn min_nontrivial_angle(&self) -> Result<Option<AngleReport>, RepError> {
        Ok(self
            .irrep_angles()?
            .into_iter()
            .filter(|r| !r.degenerate)
            .min_by(|a, b| a.angle.total_cmp(&b.angle)))
    }
}
