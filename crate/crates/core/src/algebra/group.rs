//! Breadth-first enumeration of finite matrix groups.

use std::collections::{HashMap, VecDeque};

use super::matrix::RingMatrix;
use super::AlgebraError;

pub type ElementId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub id: ElementId,
    pub label: String,
}

/// A finite group of ring matrices, closed under multiplication, with one
/// shortest generator word per element.
///
/// Element 0 is the identity. Element order is breadth-first by word length,
/// ties broken by generator label.
#[derive(Clone, Debug)]
pub struct GroupTable {
    elements: Vec<RingMatrix>,
    index: HashMap<RingMatrix, ElementId>,
    generators: Vec<Generator>,
    words: Vec<Vec<u16>>,
    /// `right[g][s]` is the id of `g * generator_s`.
    right: Vec<Vec<ElementId>>,
    generator_inverse: Vec<ElementId>,
}

pub const DEFAULT_CAP: usize = 20_000;

/// Enumerate the group generated by `generators` (matrix, label pairs).
pub fn bfs_closure(generators: Vec<(RingMatrix, String)>, cap: usize) -> Result<GroupTable, AlgebraError> {
    let Some((first, _)) = generators.first() else {
        return Err(AlgebraError::Parameter("at least one generator is required".into()));
    };
    let n = first.dim();
    let ring = first.ring();
    if generators.iter().any(|(m, _)| m.dim() != n || m.ring() != ring) {
        return Err(AlgebraError::Parameter("generators differ in size or ring".into()));
    }
    let mut gens = generators;
    gens.sort_by(|a, b| a.1.cmp(&b.1));
    if gens.len() > u16::MAX as usize {
        return Err(AlgebraError::Parameter("too many generators".into()));
    }

    let identity = RingMatrix::identity(ring, n);
    let mut elements = vec![identity.clone()];
    let mut index = HashMap::new();
    index.insert(identity, 0);
    let mut words: Vec<Vec<u16>> = vec![Vec::new()];
    let mut right: Vec<Vec<ElementId>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);

    while let Some(current) = queue.pop_front() {
        let mut row = Vec::with_capacity(gens.len());
        for (s, (g, _)) in gens.iter().enumerate() {
            let product = elements[current].mul(g)?;
            let id = match index.get(&product) {
                Some(&id) => id,
                None => {
                    let id = elements.len();
                    if id >= cap {
                        return Err(AlgebraError::CapExceeded {
                            cap,
                            frontier: queue.len() + 1,
                        });
                    }
                    let mut word = words[current].clone();
                    word.push(s as u16);
                    words.push(word);
                    index.insert(product.clone(), id);
                    elements.push(product);
                    queue.push_back(id);
                    id
                }
            };
            row.push(id);
        }
        debug_assert_eq!(right.len(), current);
        right.push(row);
    }

    let generators: Vec<Generator> = gens
        .iter()
        .map(|(m, label)| Generator {
            id: index[m],
            label: label.clone(),
        })
        .collect();
    let generator_inverse = (0..generators.len())
        .map(|s| {
            let mut x = 0;
            while right[x][s] != 0 {
                x = right[x][s];
            }
            x
        })
        .collect();

    Ok(GroupTable {
        elements,
        index,
        generators,
        words,
        right,
        generator_inverse,
    })
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, id: ElementId) -> &RingMatrix {
        &self.elements[id]
    }

    pub fn elements(&self) -> &[RingMatrix] {
        &self.elements
    }

    pub fn id_of(&self, m: &RingMatrix) -> Option<ElementId> {
        self.index.get(m).copied()
    }

    /// Generators sorted by label.
    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator_index(&self, label: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.label == label)
    }

    /// Generator indices whose product (left to right) is the element.
    pub fn word(&self, id: ElementId) -> &[u16] {
        &self.words[id]
    }

    pub fn word_labels(&self, id: ElementId) -> Vec<&str> {
        self.words[id]
            .iter()
            .map(|&s| self.generators[s as usize].label.as_str())
            .collect()
    }

    pub fn right_by_generator(&self, id: ElementId, generator: usize) -> ElementId {
        self.right[id][generator]
    }

    pub fn mul(&self, a: ElementId, b: ElementId) -> ElementId {
        self.words[b]
            .iter()
            .fold(a, |acc, &s| self.right[acc][s as usize])
    }

    pub fn inverse(&self, a: ElementId) -> ElementId {
        self.words[a]
            .iter()
            .rev()
            .fold(0, |acc, &s| self.mul(acc, self.generator_inverse[s as usize]))
    }

    /// Multiply the generator matrices along the stored word.
    pub fn evaluate_word(&self, id: ElementId) -> Result<RingMatrix, AlgebraError> {
        let first = &self.elements[0];
        let mut acc = RingMatrix::identity(first.ring(), first.dim());
        for &s in &self.words[id] {
            acc = acc.mul(&self.elements[self.generators[s as usize].id])?;
        }
        Ok(acc)
    }

    /// Subgroup generated by a subset of the table's generators, sorted.
    pub fn generator_subgroup(&self, generator_indices: &[usize]) -> Vec<ElementId> {
        self.closure_with(|x, out| {
            for &s in generator_indices {
                out.push(self.right[x][s]);
            }
        })
    }

    /// Subgroup generated by arbitrary elements, sorted.
    pub fn subgroup_closure(&self, ids: &[ElementId]) -> Vec<ElementId> {
        self.closure_with(|x, out| {
            for &g in ids {
                out.push(self.mul(x, g));
            }
        })
    }

    fn closure_with(&self, step: impl Fn(ElementId, &mut Vec<ElementId>)) -> Vec<ElementId> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut out = vec![0];
        let mut queue = VecDeque::from([0usize]);
        let mut next = Vec::new();
        while let Some(x) = queue.pop_front() {
            next.clear();
            step(x, &mut next);
            for &y in &next {
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// True when `ids` contains the identity and is closed under products.
    pub fn is_subgroup(&self, ids: &[ElementId]) -> bool {
        let mut member = vec![false; self.order()];
        for &i in ids {
            if i >= self.order() {
                return false;
            }
            member[i] = true;
        }
        member[0] && ids.iter().all(|&a| ids.iter().all(|&b| member[self.mul(a, b)]))
    }

    /// Label each element by its right coset `H g`. Returns the labels and the
    /// number of cosets; labels are assigned in order of smallest element.
    pub fn right_cosets(&self, subgroup: &[ElementId]) -> (Vec<usize>, usize) {
        let mut label = vec![usize::MAX; self.order()];
        let mut count = 0;
        for g in 0..self.order() {
            if label[g] != usize::MAX {
                continue;
            }
            for &h in subgroup {
                label[self.mul(h, g)] = count;
            }
            count += 1;
        }
        (label, count)
    }
}

/// Match a table built at a larger degree cap with one built at a smaller
/// cap: every element of `fine`, truncated to the smaller cap, must be an
/// element of `coarse`, the map must be a bijection, and it must intertwine
/// right multiplication by each generator (matched by label).
///
/// Returns the element map `fine id -> coarse id`.
pub fn truncation_map(coarse: &GroupTable, fine: &GroupTable) -> Result<Vec<ElementId>, AlgebraError> {
    if coarse.order() != fine.order() {
        return Err(AlgebraError::Inconsistent(format!(
            "orders differ: {} vs {}",
            coarse.order(),
            fine.order()
        )));
    }
    let degree = coarse.element(0).ring().max_degree();
    let mut map = Vec::with_capacity(fine.order());
    let mut hit = vec![false; coarse.order()];
    for m in fine.elements() {
        let t = m.truncate(degree)?;
        let id = coarse
            .id_of(&t)
            .ok_or_else(|| AlgebraError::Inconsistent("truncated element missing".into()))?;
        if std::mem::replace(&mut hit[id], true) {
            return Err(AlgebraError::Inconsistent("truncation is not injective".into()));
        }
        map.push(id);
    }
    for (s_fine, g) in fine.generators().iter().enumerate() {
        let s_coarse = coarse
            .generator_index(&g.label)
            .ok_or_else(|| AlgebraError::Inconsistent(format!("generator {} missing", g.label)))?;
        for x in 0..fine.order() {
            if map[fine.right_by_generator(x, s_fine)] != coarse.right_by_generator(map[x], s_coarse) {
                return Err(AlgebraError::Inconsistent(format!(
                    "multiplication by {} differs at element {x}",
                    g.label
                )));
            }
        }
    }
    Ok(map)
}
