//! Invariant subspaces, subgroup angles and the Steinberg pairwise angles.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{pair_group, steinberg_generators, AlgebraError, ElementId, GroupTable, Pair};

use crate::linalg::{self, CMatrix};

use super::representation::{RepKind, Representation};
use super::subspace::{principal_angle_with, AngleMethod, AngleReport, SubspaceBasis};
use super::{RepError, INTERSECTION_TOL};

/// `(1/|H|) sum_h pi(h)`.
pub fn averaging_projector(rep: &Representation, subgroup: &[ElementId]) -> CMatrix {
    let n = rep.dim();
    let mut acc = CMatrix::zeros(n, n);
    for &h in subgroup {
        acc += rep.image(h);
    }
    acc / Complex64::new(subgroup.len() as f64, 0.0)
}

fn check_subgroup(group: &GroupTable, ids: &[ElementId], name: &str) -> Result<(), RepError> {
    if ids.is_empty() || !group.is_subgroup(ids) {
        return Err(RepError::Input(format!("{name} is not a subgroup of the table")));
    }
    Ok(())
}

/// Orthonormal basis of the vectors fixed by every element of `subgroup`.
///
/// In the regular representation the fixed vectors are the functions
/// constant on right cosets `H g`, so the basis is the normalized coset
/// indicators, ordered by smallest element.
pub fn invariant_subspace(rep: &Representation, subgroup: &[ElementId]) -> Result<SubspaceBasis, RepError> {
    check_subgroup(rep.group(), subgroup, "subgroup")?;
    match rep.kind() {
        RepKind::RegularPermutation => {
            let (labels, count) = rep.group().right_cosets(subgroup);
            let w = Complex64::new(1.0 / (subgroup.len() as f64).sqrt(), 0.0);
            let mut cols = CMatrix::zeros(rep.dim(), count);
            for (x, &c) in labels.iter().enumerate() {
                cols[(x, c)] = w;
            }
            SubspaceBasis::new(cols, 1e-10)
        }
        RepKind::ExplicitUnitary => {
            // eigenvalues of the projector are 0 or 1
            let p = averaging_projector(rep, subgroup);
            Ok(SubspaceBasis::span_of(&p, 0.5))
        }
    }
}

/// Angle between the fixed spaces of `h1` and `h2` in the regular
/// representation, which is the infimum over all unitary representations.
///
/// Works on the coset level: with orthonormal coset indicators the cross
/// Gram matrix is `M[a,b] = |H1 g_a ∩ H2 g_b| / sqrt(|H1| |H2|)`. Since
/// `h1` and `h2` generate the table, the two fixed spaces meet exactly in
/// the constants, which are removed as a rank-one term.
pub fn subgroup_angle(group: &GroupTable, h1: &[ElementId], h2: &[ElementId]) -> Result<AngleReport, RepError> {
    check_subgroup(group, h1, "h1")?;
    check_subgroup(group, h2, "h2")?;
    let mut both = h1.to_vec();
    both.extend_from_slice(h2);
    let generated = group.subgroup_closure(&both).len();
    if generated != group.order() {
        return Err(RepError::Scope(format!(
            "the two subgroups generate {generated} of {} elements",
            group.order()
        )));
    }

    let (l1, c1) = group.right_cosets(h1);
    let (l2, c2) = group.right_cosets(h2);
    let (s1, s2) = (h1.len() as f64, h2.len() as f64);
    let order = group.order() as f64;
    let mut m = DMatrix::<f64>::zeros(c1, c2);
    for (&a, &b) in l1.iter().zip(&l2) {
        m[(a, b)] += 1.0;
    }
    // constants: each coset coordinate equals sqrt(|H| / |G|)
    let shift = (s1 * s2).sqrt() / order;
    let norm = 1.0 / (s1 * s2).sqrt();
    m.apply(|v| *v = *v * norm - shift);

    let dims = (c1, c2, 1);
    if c1 == 1 || c2 == 1 {
        return Ok(AngleReport::from_parts(None, dims, AngleMethod::Coset));
    }
    let cosine = linalg::singular_values_real(&m)[0];
    Ok(AngleReport::from_parts(Some(cosine), dims, AngleMethod::Coset))
}

/// Principal angle between the two fixed spaces inside one representation.
pub fn irrep_angle(rep: &Representation, h1: &[ElementId], h2: &[ElementId]) -> Result<AngleReport, RepError> {
    let b1 = invariant_subspace(rep, h1)?;
    let b2 = invariant_subspace(rep, h2)?;
    let method = match rep.kind() {
        RepKind::RegularPermutation => AngleMethod::Dense,
        RepKind::ExplicitUnitary => AngleMethod::ExplicitIrrep,
    };
    principal_angle_with(&b1, &b2, INTERSECTION_TOL, method)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairAngle {
    pub pair: Pair,
    pub order: usize,
    pub order_first: usize,
    pub order_second: usize,
    pub report: AngleReport,
}

/// Subgroup angle between the two generating subgroups of a pairwise
/// Steinberg subgroup.
pub fn steinberg_pair_angle(
    n: usize,
    k: usize,
    p: u32,
    max_degree: usize,
    pair: Pair,
    cap: usize,
) -> Result<PairAngle, RepError> {
    let gens = steinberg_generators(n, k, p, max_degree)?;
    let pg = pair_group(&gens, pair, cap).map_err(|e| match e {
        AlgebraError::CapExceeded { cap, frontier } => RepError::CapExceeded {
            cap,
            frontier,
            hint: format!("pair {pair} with n={n}, k={k}, p={p} is too large; lower k or n"),
        },
        other => other.into(),
    })?;
    let report = subgroup_angle(&pg.table, &pg.first, &pg.second)?;
    Ok(PairAngle {
        pair,
        order: pg.table.order(),
        order_first: pg.first.len(),
        order_second: pg.second.len(),
        report,
    })
}
