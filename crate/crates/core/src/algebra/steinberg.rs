//! Generating subgroups of `St_n(F_p<t_1..t_k>)`, their pairwise closures,
//! and exhaustive checks of the Steinberg relations on elementary matrices.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::group::{bfs_closure, ElementId, GroupTable};
use super::matrix::{elementary, RingMatrix};
use super::poly::{Ring, TruncatedPoly};
use super::AlgebraError;

pub type LabeledMatrix = (RingMatrix, String);

/// The three generating subgroups, each given by labelled generators.
#[derive(Clone, Debug)]
pub struct SteinbergGenerators {
    pub ring: Ring,
    pub n: usize,
    pub groups: [Vec<LabeledMatrix>; 3],
}

fn label(i: usize, j: usize, r: &TruncatedPoly) -> String {
    format!("x_{{{i},{j}}}({r})")
}

/// `G_1 = {x_{i,n-1}(1)}`, `G_2 = {x_{n-1,n}(1)}`,
/// `G_3 = {x_{n,j}(1), x_{n,j}(t_m)}` for `1 <= i, j <= n-2`, `1 <= m <= k`.
pub fn steinberg_generators(n: usize, k: usize, p: u32, max_degree: usize) -> Result<SteinbergGenerators, AlgebraError> {
    if n < 3 {
        return Err(AlgebraError::Unsupported(format!(
            "generating subgroups need n >= 3, got {n}"
        )));
    }
    if max_degree < n {
        return Err(AlgebraError::Parameter(format!(
            "degree cap {max_degree} must be at least n = {n}"
        )));
    }
    let ring = Ring::new(p, k, max_degree)?;
    let one = ring.one();
    let mut g1 = Vec::new();
    for i in 1..=n - 2 {
        g1.push((elementary(n, i, n - 1, &one)?, label(i, n - 1, &one)));
    }
    let g2 = vec![(elementary(n, n - 1, n, &one)?, label(n - 1, n, &one))];
    let mut coefficients = vec![one];
    for m in 1..=k {
        coefficients.push(ring.var(m)?);
    }
    let mut g3 = Vec::new();
    for j in 1..=n - 2 {
        for c in &coefficients {
            g3.push((elementary(n, n, j, c)?, label(n, j, c)));
        }
    }
    Ok(SteinbergGenerators {
        ring,
        n,
        groups: [g1, g2, g3],
    })
}

/// One of the three pairwise subgroups `G_{i,j} = <G_i, G_j>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pair {
    OneTwo,
    OneThree,
    TwoThree,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::OneTwo, Pair::OneThree, Pair::TwoThree];

    /// 0-based indices of the two generating subgroups.
    pub fn indices(self) -> (usize, usize) {
        match self {
            Pair::OneTwo => (0, 1),
            Pair::OneThree => (0, 2),
            Pair::TwoThree => (1, 2),
        }
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.indices();
        write!(f, "{},{}", a + 1, b + 1)
    }
}

impl FromStr for Pair {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        match parts.as_slice() {
            ["1", "2"] | ["2", "1"] => Ok(Pair::OneTwo),
            ["1", "3"] | ["3", "1"] => Ok(Pair::OneThree),
            ["2", "3"] | ["3", "2"] => Ok(Pair::TwoThree),
            _ => Err(AlgebraError::Parameter(format!(
                "pair must be one of 1,2 1,3 2,3; got {s:?}"
            ))),
        }
    }
}

/// An enumerated pairwise subgroup together with the element lists of its
/// two generating subgroups.
#[derive(Clone, Debug)]
pub struct PairGroup {
    pub pair: Pair,
    pub table: GroupTable,
    pub first: Vec<ElementId>,
    pub second: Vec<ElementId>,
}

pub fn pair_group(gens: &SteinbergGenerators, pair: Pair, cap: usize) -> Result<PairGroup, AlgebraError> {
    let (a, b) = pair.indices();
    let mut all = gens.groups[a].clone();
    all.extend(gens.groups[b].iter().cloned());
    let table = bfs_closure(all, cap)?;
    let pick = |group: &[LabeledMatrix]| -> Vec<usize> {
        group
            .iter()
            .map(|(_, l)| table.generator_index(l).expect("generator present"))
            .collect()
    };
    let first = table.generator_subgroup(&pick(&gens.groups[a]));
    let second = table.generator_subgroup(&pick(&gens.groups[b]));
    Ok(PairGroup {
        pair,
        table,
        first,
        second,
    })
}

/// Enumerate one generating subgroup on its own.
pub fn single_group(gens: &SteinbergGenerators, which: usize, cap: usize) -> Result<GroupTable, AlgebraError> {
    let group = gens
        .groups
        .get(which)
        .ok_or_else(|| AlgebraError::Parameter(format!("subgroup index {} out of range", which + 1)))?;
    bfs_closure(group.clone(), cap)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FamilyCount {
    pub checked: u64,
    pub violations: u64,
}

/// Pass/fail counts for the three relation families:
/// additivity, the commutator formula, and commuting disjoint positions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelationReport {
    pub families: [FamilyCount; 3],
}

impl RelationReport {
    pub fn total_violations(&self) -> u64 {
        self.families.iter().map(|f| f.violations).sum()
    }
}

/// `a^{-1} b^{-1} a b` for elementary matrices, using `x_{i,j}(r)^{-1} = x_{i,j}(-r)`.
fn elementary_commutator(
    n: usize,
    (i, j, r1): (usize, usize, &TruncatedPoly),
    (l, k, r2): (usize, usize, &TruncatedPoly),
) -> Result<RingMatrix, AlgebraError> {
    let a = elementary(n, i, j, r1)?;
    let b = elementary(n, l, k, r2)?;
    let a_inv = elementary(n, i, j, &r1.neg())?;
    let b_inv = elementary(n, l, k, &r2.neg())?;
    a_inv.mul(&b_inv)?.mul(&a)?.mul(&b)
}

pub fn verify_steinberg_relations(
    n: usize,
    k: usize,
    p: u32,
    max_degree: usize,
    pool: &[TruncatedPoly],
) -> Result<RelationReport, AlgebraError> {
    if n < 2 {
        return Err(AlgebraError::Parameter(format!("n = {n} has no off-diagonal positions")));
    }
    let ring = Ring::new(p, k, max_degree)?;
    if let Some(bad) = pool.iter().find(|r| r.ring() != ring) {
        return Err(AlgebraError::Parameter(format!(
            "pool element {bad} is not in the ring (p={p}, k={k}, D={max_degree})"
        )));
    }
    let max_pool = pool.iter().map(TruncatedPoly::degree).max().unwrap_or(0);
    if max_degree < 2 * max_pool {
        return Err(AlgebraError::TruncationRisk(format!(
            "pool has degree {max_pool}; products reach degree {} but the cap is {max_degree}, \
             so truncation could hide a failing relation",
            2 * max_pool
        )));
    }

    let positions: Vec<(usize, usize)> = (1..=n)
        .flat_map(|i| (1..=n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let identity = RingMatrix::identity(ring, n);
    let mut report = RelationReport::default();

    for &(i, j) in &positions {
        for r1 in pool {
            let a = elementary(n, i, j, r1)?;
            for r2 in pool {
                let lhs = a.mul(&elementary(n, i, j, r2)?)?;
                let rhs = elementary(n, i, j, &r1.add(r2)?)?;
                tally(&mut report.families[0], lhs == rhs);
            }
        }
    }

    for &(i, j) in &positions {
        for k2 in (1..=n).filter(|&c| c != i && c != j) {
            for r1 in pool {
                for r2 in pool {
                    let lhs = elementary_commutator(n, (i, j, r1), (j, k2, r2))?;
                    let rhs = elementary(n, i, k2, &r1.mul(r2)?)?;
                    tally(&mut report.families[1], lhs == rhs);
                }
            }
        }
    }

    for &(i, j) in &positions {
        for &(l, k2) in &positions {
            if j == l || i == k2 {
                continue;
            }
            for r1 in pool {
                for r2 in pool {
                    let c = elementary_commutator(n, (i, j, r1), (l, k2, r2))?;
                    tally(&mut report.families[2], c == identity);
                }
            }
        }
    }
    Ok(report)
}

fn tally(count: &mut FamilyCount, ok: bool) {
    count.checked += 1;
    if !ok {
        count.violations += 1;
    }
}

/// Square matrix with exact integer entries, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigInt::one();
        }
        Self { n, entries }
    }

    /// Integer elementary matrix at 1-based `(i, j)`.
    pub fn elementary(n: usize, i: usize, j: usize, r: i64) -> Self {
        let mut m = Self::identity(n);
        m.entries[(i - 1) * n + (j - 1)] = BigInt::from(r);
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> &BigInt {
        &self.entries[row * self.n + col]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = BigInt::zero();
                for l in 0..n {
                    acc += self.get(i, l) * rhs.get(l, j);
                }
                entries.push(acc);
            }
        }
        Self { n, entries }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::identity(self.n), |acc, _| acc.mul(self))
    }
}

/// Image in `GL_n(Z)` of `(x_{1,2}(1) x_{2,1}(-1) x_{1,2}(1))^power`.
pub fn kernel_word_power(n: usize, power: u32) -> Result<IntMatrix, AlgebraError> {
    if n < 2 {
        return Err(AlgebraError::Parameter(format!("n = {n} is too small")));
    }
    let base = IntMatrix::elementary(n, 1, 2, 1)
        .mul(&IntMatrix::elementary(n, 2, 1, -1))
        .mul(&IntMatrix::elementary(n, 1, 2, 1));
    Ok(base.pow(power))
}

/// Image of the order-two kernel element `(x_{1,2}(1) x_{2,1}(-1) x_{1,2}(1))^4`.
pub fn kernel_word_image(n: usize) -> Result<IntMatrix, AlgebraError> {
    if n < 3 {
        return Err(AlgebraError::Unsupported(format!("kernel word needs n >= 3, got {n}")));
    }
    kernel_word_power(n, 4)
}
