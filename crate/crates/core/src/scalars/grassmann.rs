//! Exact elements of the Grassmann algebra over ℚ generated by finitely many
//! odd constants.
//!
//! A monomial is a bit mask of generator indices, always read in increasing
//! index order (`λ_i λ_j` with `i < j`). Products reorder factors and track
//! the Koszul sign.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::{Parity, Q};
use crate::error::{Error, Result};

/// Set of odd generators appearing in a monomial.
pub type Mask = u32;

/// Maximum number of odd generators a session may declare.
pub const MAX_GENERATORS: usize = 24;

/// Sign of `m_a · m_b` once brought to normal order, or `None` when the
/// monomials share a generator (the product vanishes).
pub(crate) fn monomial_product_sign(a: Mask, b: Mask) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        swaps += (a >> (j + 1)).count_ones();
    }
    Some(swaps % 2 == 1)
}

pub(crate) fn mask_parity(m: Mask) -> Parity {
    Parity::from(m.count_ones() as usize)
}

/// Element of the constant superalgebra Λ = ℚ[λ₁, …, λ_g].
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Grassmann {
    terms: BTreeMap<Mask, Q>,
}

impl Grassmann {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::rational(Q::one())
    }

    pub fn rational(q: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(0, q);
        }
        Grassmann { terms }
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(Q::from_integer(n.into()))
    }

    /// The odd generator `λ_{index}` (zero-based).
    pub fn generator(index: usize) -> Self {
        assert!(index < MAX_GENERATORS, "generator index {index} out of range");
        Self::monomial(1 << index, Q::one())
    }

    pub fn monomial(mask: Mask, coeff: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(mask, coeff);
        }
        Grassmann { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Mask, &Q)> + '_ {
        self.terms.iter().map(|(m, q)| (*m, q))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the empty monomial.
    pub fn body(&self) -> Q {
        self.terms.get(&0).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_invertible(&self) -> bool {
        !self.body().is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|m| *m == 0)
    }

    /// Bit mask of all generators that occur.
    pub fn support(&self) -> Mask {
        self.terms.keys().fold(0, |acc, m| acc | m)
    }

    pub fn has_parity(&self, p: Parity) -> bool {
        self.terms.keys().all(|m| mask_parity(*m) == p)
    }

    pub fn parity(&self) -> Option<Parity> {
        if self.has_parity(Parity::Even) {
            Some(Parity::Even)
        } else if self.has_parity(Parity::Odd) {
            Some(Parity::Odd)
        } else {
            None
        }
    }

    /// `(-1)^{parity}` applied termwise.
    pub fn parity_involution(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, q)| (*m, if mask_parity(*m).is_odd() { -q } else { q.clone() }))
            .collect();
        Grassmann { terms }
    }

    pub fn scale(&self, q: &Q) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Grassmann {
            terms: self.terms.iter().map(|(m, c)| (*m, c * q)).collect(),
        }
    }

    fn accumulate(terms: &mut BTreeMap<Mask, Q>, mask: Mask, q: Q) {
        use std::collections::btree_map::Entry;
        match terms.entry(mask) {
            Entry::Vacant(v) => {
                if !q.is_zero() {
                    v.insert(q);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += q;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, q) in &rhs.terms {
            Self::accumulate(&mut terms, *m, q.clone());
        }
        Grassmann { terms }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, q) in &rhs.terms {
            Self::accumulate(&mut terms, *m, -q);
        }
        Grassmann { terms }
    }

    pub fn neg(&self) -> Self {
        Grassmann {
            terms: self.terms.iter().map(|(m, q)| (*m, -q)).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (ma, qa) in &self.terms {
            for (mb, qb) in &rhs.terms {
                if let Some(negative) = monomial_product_sign(*ma, *mb) {
                    let q = qa * qb;
                    Self::accumulate(&mut terms, ma | mb, if negative { -q } else { q });
                }
            }
        }
        Grassmann { terms }
    }

    /// Inverse via `b⁻¹ Σ (-n b⁻¹)^k`, where `b` is the body and `n` the
    /// nilpotent remainder.
    pub fn inverse(&self) -> Result<Self> {
        let body = self.body();
        if body.is_zero() {
            return Err(Error::NotInvertible(format!("{self} has zero body")));
        }
        let binv = Self::rational(body.recip());
        let mut nil = self.clone();
        nil.terms.remove(&0);
        let step = nil.mul(&binv).neg();
        let mut acc = Self::one();
        let mut power = Self::one();
        loop {
            power = power.mul(&step);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        Ok(acc.mul(&binv))
    }
}

impl fmt::Debug for Grassmann {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Grassmann({self})")
    }
}

/// Writes `c·λ…` terms with default generator names `l1, l2, …`.
impl fmt::Display for Grassmann {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = crate::scalars::default_generator_names(MAX_GENERATORS);
        f.write_str(&format_grassmann(self, &names))
    }
}

pub(crate) fn format_mask(mask: Mask, names: &[String]) -> Vec<String> {
    (0..32)
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| {
            names
                .get(i as usize)
                .cloned()
                .unwrap_or_else(|| format!("l{}", i + 1))
        })
        .collect()
}

pub(crate) fn format_grassmann(g: &Grassmann, names: &[String]) -> String {
    let mut terms = Vec::new();
    for (mask, q) in g.terms() {
        terms.push((q.clone(), format_mask(mask, names)));
    }
    crate::print::join_terms(terms)
}
