use std::fmt;

use super::poly::{Ring, TruncatedPoly};
use super::AlgebraError;

/// Square matrix over a truncated ring, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingMatrix {
    n: usize,
    entries: Vec<TruncatedPoly>,
}

impl RingMatrix {
    pub fn identity(ring: Ring, n: usize) -> Self {
        let mut entries = vec![ring.zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = ring.one();
        }
        Self { n, entries }
    }

    /// Build from a row-major list of entries.
    pub fn from_entries(n: usize, entries: Vec<TruncatedPoly>) -> Result<Self, AlgebraError> {
        if n == 0 || entries.len() != n * n {
            return Err(AlgebraError::Parameter(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                entries.len()
            )));
        }
        let ring = entries[0].ring();
        if entries.iter().any(|e| e.ring() != ring) {
            return Err(AlgebraError::Parameter("entries from different rings".into()));
        }
        Ok(Self { n, entries })
    }

    /// Permutation matrix sending basis vector `j` to `perm[j]`.
    pub fn permutation(ring: Ring, perm: &[usize]) -> Result<Self, AlgebraError> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &target in perm {
            if target >= n || seen[target] {
                return Err(AlgebraError::Parameter(format!("{perm:?} is not a permutation")));
            }
            seen[target] = true;
        }
        let mut entries = vec![ring.zero(); n * n];
        for (j, &i) in perm.iter().enumerate() {
            entries[i * n + j] = ring.one();
        }
        Ok(Self { n, entries })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> Ring {
        self.entries[0].ring()
    }

    /// Entry at 0-based `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> &TruncatedPoly {
        &self.entries[row * self.n + col]
    }

    pub fn entries(&self) -> &[TruncatedPoly] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let e = self.get(i, j);
                if i == j {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if self.n != rhs.n || self.ring() != rhs.ring() {
            return Err(AlgebraError::Parameter("matrix shape or ring mismatch".into()));
        }
        let n = self.n;
        let ring = self.ring();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ring.zero();
                for l in 0..n {
                    let a = self.get(i, l);
                    let b = rhs.get(l, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b)?)?;
                }
                entries.push(acc);
            }
        }
        Ok(Self { n, entries })
    }

    /// Entrywise truncation to a lower degree cap.
    pub fn truncate(&self, max_degree: usize) -> Result<Self, AlgebraError> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.truncate(max_degree))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { n: self.n, entries })
    }
}

impl fmt::Display for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Elementary matrix `x_{i,j}(r)`: identity plus `r` at 1-based `(i, j)`.
pub fn elementary(n: usize, i: usize, j: usize, r: &TruncatedPoly) -> Result<RingMatrix, AlgebraError> {
    if i == j {
        return Err(AlgebraError::Parameter(format!(
            "elementary matrix needs i != j, got i = j = {i}"
        )));
    }
    if i == 0 || j == 0 || i > n || j > n {
        return Err(AlgebraError::Parameter(format!(
            "index ({i},{j}) outside a {n}x{n} matrix"
        )));
    }
    let mut m = RingMatrix::identity(r.ring(), n);
    m.entries[(i - 1) * n + (j - 1)] = r.clone();
    Ok(m)
}
