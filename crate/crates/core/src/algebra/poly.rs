//! Truncated free algebra `F_p<t_1, ..., t_k>` modulo all monomials of total
//! degree greater than a fixed cap.
//!
//! Monomials are words over the variables. A word of length `len` is packed
//! into a base-`k` integer so that monomials are `Copy` and concatenation is
//! a multiply-add. The packing is only valid while `k^cap` fits in a `u64`,
//! which [`Ring::new`] checks.

use std::cmp::Ordering;
use std::fmt;

use super::AlgebraError;

/// Parameters shared by every element of one truncated ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    p: u32,
    vars: u8,
    max_degree: u8,
}

impl Ring {
    pub fn new(p: u32, vars: usize, max_degree: usize) -> Result<Self, AlgebraError> {
        if !is_prime(p) {
            return Err(AlgebraError::Parameter(format!("modulus {p} is not prime")));
        }
        if vars > 16 {
            return Err(AlgebraError::Parameter(format!(
                "{vars} variables is more than the supported 16"
            )));
        }
        if max_degree > 40 {
            return Err(AlgebraError::Parameter(format!(
                "degree cap {max_degree} is more than the supported 40"
            )));
        }
        if vars > 1 && (vars as u128).checked_pow(max_degree as u32).is_none_or(|v| v > u64::MAX as u128) {
            return Err(AlgebraError::Parameter(format!(
                "{vars}^{max_degree} monomials do not fit the packed encoding"
            )));
        }
        Ok(Self {
            p,
            vars: vars as u8,
            max_degree: max_degree as u8,
        })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn vars(&self) -> usize {
        self.vars as usize
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree as usize
    }

    /// Same modulus and variables, different degree cap.
    pub fn with_max_degree(&self, max_degree: usize) -> Result<Self, AlgebraError> {
        Ring::new(self.p, self.vars(), max_degree)
    }

    pub fn zero(&self) -> TruncatedPoly {
        TruncatedPoly {
            ring: *self,
            terms: Vec::new(),
        }
    }

    pub fn one(&self) -> TruncatedPoly {
        self.constant(1)
    }

    pub fn constant(&self, c: i64) -> TruncatedPoly {
        let c = c.rem_euclid(self.p as i64) as u32;
        let mut terms = Vec::new();
        if c != 0 {
            terms.push((Monomial::ONE, c));
        }
        TruncatedPoly { ring: *self, terms }
    }

    /// The variable `t_{index}` (1-based, as in `t_1 .. t_k`).
    pub fn var(&self, index: usize) -> Result<TruncatedPoly, AlgebraError> {
        if index == 0 || index > self.vars() {
            return Err(AlgebraError::Parameter(format!(
                "variable t_{index} does not exist in a ring with {} variables",
                self.vars
            )));
        }
        self.monomial(&[index - 1], 1)
    }

    /// `coeff * t_{w_0} t_{w_1} ...` with 0-based letters. Words longer than the
    /// cap give zero.
    pub fn monomial(&self, word: &[usize], coeff: i64) -> Result<TruncatedPoly, AlgebraError> {
        if let Some(&bad) = word.iter().find(|&&w| w >= self.vars()) {
            return Err(AlgebraError::Parameter(format!("letter {bad} out of range")));
        }
        if word.len() > self.max_degree() {
            return Ok(self.zero());
        }
        let mut m = Monomial::ONE;
        for &w in word {
            m = m.concat(Monomial { len: 1, code: w as u64 }, self.vars as u64);
        }
        let c = coeff.rem_euclid(self.p as i64) as u32;
        let terms = if c == 0 { Vec::new() } else { vec![(m, c)] };
        Ok(TruncatedPoly { ring: *self, terms })
    }

    /// Every polynomial `a_0 + a_1 t_1 + ... + a_k t_k`, in a fixed order.
    pub fn degree_one_pool(&self) -> Vec<TruncatedPoly> {
        let p = self.p as usize;
        let slots = self.vars() + 1;
        let total = p.pow(slots as u32);
        let mut out = Vec::with_capacity(total);
        for mut idx in 0..total {
            let mut poly = self.zero();
            for slot in 0..slots {
                let a = (idx % p) as i64;
                idx /= p;
                if a == 0 {
                    continue;
                }
                let term = if slot == 0 {
                    self.constant(a)
                } else {
                    self.monomial(&[slot - 1], a).expect("letter in range")
                };
                poly = poly.add(&term).expect("same ring");
            }
            out.push(poly);
        }
        out
    }
}

/// A word over the variables, packed as `(length, base-k code)`.
///
/// Ordering is by length first, then by code, which is graded
/// lexicographic order on words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    len: u8,
    code: u64,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { len: 0, code: 0 };

    pub fn degree(&self) -> usize {
        self.len as usize
    }

    fn concat(self, rhs: Monomial, base: u64) -> Monomial {
        let shift = base.pow(rhs.len as u32);
        Monomial {
            len: self.len + rhs.len,
            code: self.code * shift + rhs.code,
        }
    }

    /// Letters of the word, 0-based.
    pub fn letters(&self, vars: usize) -> Vec<usize> {
        let base = vars.max(1) as u64;
        let mut out = vec![0usize; self.len as usize];
        let mut code = self.code;
        for slot in out.iter_mut().rev() {
            *slot = (code % base) as usize;
            code /= base;
        }
        out
    }
}

/// Element of a truncated free algebra. Terms are sorted by monomial and
/// every stored coefficient is in `1..p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedPoly {
    ring: Ring,
    terms: Vec<(Monomial, u32)>,
}

impl TruncatedPoly {
    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn terms(&self) -> &[(Monomial, u32)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0] == (Monomial::ONE, 1)
    }

    /// Highest monomial length present; zero for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.ring != other.ring {
            return Err(AlgebraError::Parameter(format!(
                "ring mismatch: {:?} vs {:?}",
                self.ring, other.ring
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let p = self.ring.p;
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = self.terms[i];
            let (mb, cb) = other.terms[j];
            match ma.cmp(&mb) {
                Ordering::Less => {
                    terms.push((ma, ca));
                    i += 1;
                }
                Ordering::Greater => {
                    terms.push((mb, cb));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = (ca + cb) % p;
                    if c != 0 {
                        terms.push((ma, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend_from_slice(&self.terms[i..]);
        terms.extend_from_slice(&other.terms[j..]);
        Ok(Self { ring: self.ring, terms })
    }

    pub fn neg(&self) -> Self {
        let p = self.ring.p;
        Self {
            ring: self.ring,
            terms: self.terms.iter().map(|&(m, c)| (m, p - c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.neg())
    }

    /// Non-commutative product; monomials of length above the cap vanish.
    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(self.ring.zero());
        }
        let p = self.ring.p as u64;
        let cap = self.ring.max_degree;
        let base = self.ring.vars as u64;
        let mut raw: Vec<(Monomial, u64)> = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &(ma, ca) in &self.terms {
            for &(mb, cb) in &other.terms {
                if ma.len + mb.len > cap {
                    continue;
                }
                raw.push((ma.concat(mb, base), (ca as u64 * cb as u64) % p));
            }
        }
        raw.sort_unstable_by_key(|&(m, _)| m);
        let mut terms: Vec<(Monomial, u32)> = Vec::with_capacity(raw.len());
        let mut iter = raw.into_iter().peekable();
        while let Some((m, mut c)) = iter.next() {
            while let Some(&(m2, c2)) = iter.peek() {
                if m2 != m {
                    break;
                }
                c = (c + c2) % p;
                iter.next();
            }
            if c != 0 {
                terms.push((m, c as u32));
            }
        }
        Ok(Self { ring: self.ring, terms })
    }

    /// Drop every monomial longer than `max_degree` and move to the ring with
    /// that cap.
    pub fn truncate(&self, max_degree: usize) -> Result<Self, AlgebraError> {
        let ring = self.ring.with_max_degree(max_degree)?;
        Ok(Self {
            ring,
            terms: self
                .terms
                .iter()
                .copied()
                .filter(|(m, _)| m.degree() <= max_degree)
                .collect(),
        })
    }
}

impl fmt::Display for TruncatedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, "+")?;
            }
            let word: String = m
                .letters(self.ring.vars())
                .iter()
                .map(|l| format!("t{}", l + 1))
                .collect();
            match (m.degree(), *c) {
                (0, c) => write!(f, "{c}")?,
                (_, 1) => write!(f, "{word}")?,
                (_, c) => write!(f, "{c}{word}")?,
            }
        }
        Ok(())
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring(p: u32, k: usize, d: usize) -> Ring {
        Ring::new(p, k, d).unwrap()
    }

    #[test]
    fn additive_inverse_cancels() {
        let r = ring(5, 1, 3);
        let t1 = r.var(1).unwrap();
        let minus = r.monomial(&[0], 4).unwrap();
        assert!(t1.add(&minus).unwrap().is_zero());
    }

    #[test]
    fn product_is_non_commutative() {
        let r = ring(5, 2, 3);
        let t1 = r.var(1).unwrap();
        let t2 = r.var(2).unwrap();
        let a = t1.mul(&t2).unwrap();
        let b = t2.mul(&t1).unwrap();
        assert_ne!(a, b);
        assert_eq!(a, r.monomial(&[0, 1], 1).unwrap());
        assert_eq!(b, r.monomial(&[1, 0], 1).unwrap());
        assert_eq!(a.to_string(), "t1t2");
    }

    #[test]
    fn truncation_kills_long_words() {
        let r = ring(5, 2, 2);
        let t1t2 = r.monomial(&[0, 1], 1).unwrap();
        let t1 = r.var(1).unwrap();
        assert!(t1t2.mul(&t1).unwrap().is_zero());
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let a = ring(5, 1, 3).one();
        let b = ring(7, 1, 3).one();
        assert!(matches!(a.add(&b), Err(AlgebraError::Parameter(_))));
        let c = ring(5, 1, 4).one();
        assert!(a.mul(&c).is_err());
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(Ring::new(4, 1, 3).is_err());
        assert!(Ring::new(1, 1, 3).is_err());
    }

    #[test]
    fn degree_one_pool_size() {
        assert_eq!(ring(5, 1, 2).degree_one_pool().len(), 25);
        assert_eq!(ring(3, 2, 2).degree_one_pool().len(), 27);
        let pool = ring(5, 2, 2).degree_one_pool();
        assert!(pool.iter().all(|q| q.degree() <= 1));
        assert!(pool[0].is_zero());
    }

    #[test]
    fn letters_round_trip() {
        let r = ring(3, 3, 4);
        let m = r.monomial(&[2, 0, 1, 2], 1).unwrap();
        assert_eq!(m.terms()[0].0.letters(3), vec![2, 0, 1, 2]);
    }

    fn arb_poly(r: Ring) -> impl Strategy<Value = TruncatedPoly> {
        let words = proptest::collection::vec(
            (proptest::collection::vec(0..r.vars(), 0..=r.max_degree()), 0..r.modulus() as i64),
            0..5,
        );
        words.prop_map(move |ws| {
            ws.into_iter().fold(r.zero(), |acc, (w, c)| {
                acc.add(&r.monomial(&w, c).unwrap()).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(Ring::new(3, 2, 3).unwrap()),
                       b in arb_poly(Ring::new(3, 2, 3).unwrap()),
                       c in arb_poly(Ring::new(3, 2, 3).unwrap())) {
            let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
            let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            let left = a.mul(&b.add(&c).unwrap()).unwrap();
            let right = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
            prop_assert!(a.sub(&a).unwrap().is_zero());
            let one = a.ring().one();
            prop_assert_eq!(a.mul(&one).unwrap(), a.clone());
            for &(m, coeff) in a.terms() {
                prop_assert!(coeff > 0 && coeff < 3);
                prop_assert!(m.degree() <= 3);
            }
        }
    }
}
