use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use crate::algebra::{ElementId, GroupTable};

use super::RepError;

pub use crate::linalg::CMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepKind {
    RegularPermutation,
    ExplicitUnitary,
}

#[derive(Debug)]
enum Images {
    /// Left translation on functions of the group; images computed on demand.
    Regular,
    Explicit {
        generators: Vec<CMatrix>,
        all: OnceLock<Vec<CMatrix>>,
    },
}

/// A finite-dimensional unitary representation of an enumerated group.
#[derive(Debug)]
pub struct Representation {
    group: Arc<GroupTable>,
    dim: usize,
    label: String,
    images: Images,
}

const UNITARY_TOL: f64 = 1e-10;

/// Left-regular representation: `pi(g) e_x = e_{g x}`.
pub fn regular_representation(group: Arc<GroupTable>) -> Representation {
    Representation {
        dim: group.order(),
        group,
        label: "regular".into(),
        images: Images::Regular,
    }
}

impl Representation {
    /// Representation given by one unitary matrix per table generator (in
    /// the table's generator order). Images of other elements are products
    /// along the stored generator words.
    pub fn explicit(group: Arc<GroupTable>, generators: Vec<CMatrix>, label: impl Into<String>) -> Result<Self, RepError> {
        if generators.len() != group.generators().len() {
            return Err(RepError::Input(format!(
                "{} generator images for {} generators",
                generators.len(),
                group.generators().len()
            )));
        }
        let dim = generators.first().map_or(0, |m| m.nrows());
        for (s, m) in generators.iter().enumerate() {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(RepError::Input(format!("generator image {s} is not {dim}x{dim}")));
            }
            let defect = (m.adjoint() * m - CMatrix::identity(dim, dim)).camax();
            if defect > UNITARY_TOL {
                return Err(RepError::Input(format!(
                    "generator image {s} is not unitary (defect {defect:e})"
                )));
            }
        }
        Ok(Self {
            group,
            dim,
            label: label.into(),
            images: Images::Explicit {
                generators,
                all: OnceLock::new(),
            },
        })
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> RepKind {
        match self.images {
            Images::Regular => RepKind::RegularPermutation,
            Images::Explicit { .. } => RepKind::ExplicitUnitary,
        }
    }

    /// For the regular representation, the permutation `x -> g x`.
    pub fn permutation(&self, g: ElementId) -> Option<Vec<ElementId>> {
        match self.images {
            Images::Regular => Some((0..self.group.order()).map(|x| self.group.mul(g, x)).collect()),
            Images::Explicit { .. } => None,
        }
    }

    pub fn image(&self, g: ElementId) -> CMatrix {
        match &self.images {
            Images::Regular => {
                let n = self.dim;
                let mut m = CMatrix::zeros(n, n);
                for x in 0..n {
                    m[(self.group.mul(g, x), x)] = Complex64::new(1.0, 0.0);
                }
                m
            }
            Images::Explicit { .. } => self.all_images()[g].clone(),
        }
    }

    fn all_images(&self) -> &[CMatrix] {
        match &self.images {
            Images::Regular => unreachable!("regular images are not cached"),
            Images::Explicit { generators, all } => all.get_or_init(|| {
                (0..self.group.order())
                    .map(|g| {
                        self.group.word(g).iter().fold(
                            CMatrix::identity(self.dim, self.dim),
                            |acc, &s| acc * &generators[s as usize],
                        )
                    })
                    .collect()
            }),
        }
    }

    /// Character value `trace(pi(g))`.
    pub fn character(&self, g: ElementId) -> Complex64 {
        match &self.images {
            Images::Regular => {
                if g == 0 {
                    Complex64::new(self.dim as f64, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            Images::Explicit { .. } => self.all_images()[g].trace(),
        }
    }

    /// Largest entry of `pi(ab) - pi(a) pi(b)` over the given pairs.
    pub fn homomorphism_defect(&self, pairs: &[(ElementId, ElementId)]) -> f64 {
        pairs
            .iter()
            .map(|&(a, b)| (self.image(self.group.mul(a, b)) - self.image(a) * self.image(b)).camax())
            .fold(0.0, f64::max)
    }

    /// Block-diagonal sum of two explicit representations of the same group.
    pub fn direct_sum(&self, other: &Representation) -> Result<Representation, RepError> {
        let (Images::Explicit { generators: ga, .. }, Images::Explicit { generators: gb, .. }) =
            (&self.images, &other.images)
        else {
            return Err(RepError::Input("direct sums need explicit representations".into()));
        };
        if !Arc::ptr_eq(&self.group, &other.group) {
            return Err(RepError::Input("representations of different groups".into()));
        }
        let (n, m) = (self.dim, other.dim);
        let gens = ga
            .iter()
            .zip(gb)
            .map(|(a, b)| {
                let mut out = CMatrix::zeros(n + m, n + m);
                out.view_mut((0, 0), (n, n)).copy_from(a);
                out.view_mut((n, n), (m, m)).copy_from(b);
                out
            })
            .collect();
        Representation::explicit(
            self.group.clone(),
            gens,
            format!("{}+{}", self.label, other.label),
        )
    }

    /// Underlying real representation of dimension `2 dim`: `A + iB` becomes
    /// `[[A, -B], [B, A]]`.
    pub fn realify(&self) -> Result<Representation, RepError> {
        let Images::Explicit { generators, .. } = &self.images else {
            return Err(RepError::Input("only explicit representations can be realified".into()));
        };
        let n = self.dim;
        let gens = generators
            .iter()
            .map(|g| {
                let mut out = CMatrix::zeros(2 * n, 2 * n);
                for i in 0..n {
                    for j in 0..n {
                        let z = g[(i, j)];
                        out[(i, j)] = Complex64::new(z.re, 0.0);
                        out[(i, j + n)] = Complex64::new(-z.im, 0.0);
                        out[(i + n, j)] = Complex64::new(z.im, 0.0);
                        out[(i + n, j + n)] = Complex64::new(z.re, 0.0);
                    }
                }
                out
            })
            .collect();
        Representation::explicit(self.group.clone(), gens, format!("real({})", self.label))
    }
}
