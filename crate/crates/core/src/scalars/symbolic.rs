//! Polynomials in the jets `Dᵏs` of abstract symbols.
//!
//! A symbol `s` stands for an unspecified function of `(x, ξ)` with a fixed
//! parity; its jet `Dᵏs` has parity `s̃ + k`. Constants (`Dλ = 0`) may be
//! even or odd. Odd variables anticommute and square to zero, so every
//! element has a unique normal form: monomials are sorted by the global
//! variable order (jets before constants, then symbol name, then jet level)
//! and carry the Koszul sign of that reordering.
//!
//! Even variables may carry negative exponents: the model is the ring of
//! Laurent polynomials in the even variables, polynomial in the odd ones.
//! This lets generic entries such as `a11` be inverted.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{q, Parity, Scalar, Q};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    Jet,
    Constant,
}

/// A generator of the symbolic algebra: `Dᵏs` or a constant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Var {
    kind: VarKind,
    name: Arc<str>,
    level: u32,
    base: Parity,
}

/// Splits `a12` into `("a", Some(12))` for natural ordering.
fn name_key(name: &str) -> (&str, Option<u64>) {
    let digits = name.len() - name.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    let (stem, num) = name.split_at(name.len() - digits);
    (stem, num.parse().ok())
}

fn cmp_names(a: &str, b: &str) -> Ordering {
    name_key(a).cmp(&name_key(b)).then_with(|| a.cmp(b))
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        self.kind
            .cmp(&other.kind)
            .then_with(|| cmp_names(&self.name, &other.name))
            .then_with(|| self.level.cmp(&other.level))
            .then_with(|| self.base.cmp(&other.base))
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Var {
    pub fn symbol(name: &str, parity: Parity) -> Self {
        Var {
            kind: VarKind::Jet,
            name: Arc::from(name),
            level: 0,
            base: parity,
        }
    }

    pub fn constant(name: &str, parity: Parity) -> Self {
        Var {
            kind: VarKind::Constant,
            name: Arc::from(name),
            level: 0,
            base: parity,
        }
    }

    pub fn kind(&self) -> VarKind {
        self.kind
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Parity of the underlying symbol (level 0).
    pub fn base_parity(&self) -> Parity {
        self.base
    }

    pub fn parity(&self) -> Parity {
        self.base + Parity::from(self.level as usize)
    }

    /// `D` of this variable, `None` for constants.
    pub fn d(&self) -> Option<Var> {
        match self.kind {
            VarKind::Constant => None,
            VarKind::Jet => Some(Var {
                level: self.level + 1,
                ..self.clone()
            }),
        }
    }

    /// The same symbol at jet level `level`.
    pub fn at_level(&self, level: u32) -> Var {
        Var { level, ..self.clone() }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.level {
            0 => write!(f, "{}", self.name),
            1 => write!(f, "D({})", self.name),
            k => write!(f, "D^{k}({})", self.name),
        }
    }
}

/// Normal-ordered product of variables with exponents (odd ones have
/// exponent 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, i32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn factors(&self) -> &[(Var, i32)] {
        &self.0
    }

    pub fn degree(&self) -> i32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn parity(&self) -> Parity {
        self.0.iter().fold(Parity::Even, |p, (v, _)| p + v.parity())
    }

    /// True when some odd variable occurs (the monomial is nilpotent).
    pub fn has_odd_factor(&self) -> bool {
        self.0.iter().any(|(v, _)| v.parity().is_odd())
    }

    fn inverse_even(&self) -> Monomial {
        Monomial(self.0.iter().map(|(v, e)| (v.clone(), -e)).collect())
    }

    /// Product in normal order with its sign, `None` if an odd variable
    /// repeats.
    pub fn mul(&self, rhs: &Monomial) -> Option<(Monomial, bool)> {
        let mut negative = false;
        // Count, for every odd variable of rhs, the odd variables of self
        // that sort after it: each is one transposition.
        for (vb, _) in rhs.0.iter().filter(|(v, _)| v.parity().is_odd()) {
            let larger = self
                .0
                .iter()
                .filter(|(va, _)| va.parity().is_odd() && va > vb)
                .count();
            if self.0.iter().any(|(va, _)| va == vb) {
                return None;
            }
            negative ^= larger % 2 == 1;
        }
        let mut merged: Vec<(Var, i32)> = Vec::with_capacity(self.0.len() + rhs.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < rhs.0.len() {
            let take_left = match (self.0.get(i), rhs.0.get(j)) {
                (Some(a), Some(b)) => match a.0.cmp(&b.0) {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => {
                        if a.1 + b.1 != 0 {
                            merged.push((a.0.clone(), a.1 + b.1));
                        }
                        i += 1;
                        j += 1;
                        continue;
                    }
                },
                (Some(_), None) => true,
                (None, _) => false,
            };
            if take_left {
                merged.push(self.0[i].clone());
                i += 1;
            } else {
                merged.push(rhs.0[j].clone());
                j += 1;
            }
        }
        Some((Monomial(merged), negative))
    }
}

/// Graded order: lower degree first, then lexicographic in the variables;
/// the empty monomial sorts last so constants print at the end.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .is_empty()
            .cmp(&other.0.is_empty())
            .then_with(|| self.degree().cmp(&other.degree()))
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = monomial_factors(self);
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

fn monomial_factors(m: &Monomial) -> Vec<String> {
    m.0.iter()
        .map(|(v, e)| match (*e, v.level()) {
            (1, _) => v.to_string(),
            (e, 0) => format!("{v}^{e}"),
            (e, _) => format!("({v})^{e}"),
        })
        .collect()
}

/// Element of the symbolic model.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SymbolicScalar {
    terms: BTreeMap<Monomial, Q>,
}

impl SymbolicScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::rational(Q::one())
    }

    pub fn rational(c: Q) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(q(n))
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v), Q::one())
    }

    pub fn symbol(name: &str, parity: Parity) -> Self {
        Self::var(Var::symbol(name, parity))
    }

    pub fn constant(name: &str, parity: Parity) -> Self {
        Self::var(Var::constant(name, parity))
    }

    pub fn term(m: Monomial, c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        SymbolicScalar { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Rational constant term.
    pub fn body(&self) -> Q {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    pub fn as_rational(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    fn accumulate(terms: &mut BTreeMap<Monomial, Q>, m: Monomial, c: Q) {
        use std::collections::btree_map::Entry;
        match terms.entry(m) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// All variables that occur.
    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| v.clone()))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// Evaluates in another model: each variable is sent to a value, jets
    /// through `D`. Products are taken in normal order, so the result is
    /// sign-correct in any supercommutative target.
    pub fn evaluate<S: Scalar>(
        &self,
        template: &S,
        value: &mut dyn FnMut(&Var) -> Option<S>,
    ) -> Result<S> {
        let mut acc = template.zero_like();
        let mut cache: BTreeMap<Var, S> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut prod = template.rational_like(c);
            for (v, e) in &m.0 {
                let val = match cache.get(v) {
                    Some(x) => x.clone(),
                    None => {
                        let base = v.at_level(0);
                        let root = value(&base)
                            .ok_or_else(|| Error::UndeclaredSymbol(format!("`{}`", base.name())))?;
                        let x = root.superderivative_n(v.level() as usize);
                        cache.insert(v.clone(), x.clone());
                        x
                    }
                };
                let val = if *e < 0 { val.try_inverse()? } else { val };
                for _ in 0..e.unsigned_abs() {
                    prod = prod.times(&val);
                }
            }
            acc = acc.plus(&prod);
        }
        Ok(acc)
    }

    /// Replaces the symbol named `name` (and all its jets) by `value`.
    pub fn substitute(&self, name: &str, value: &SymbolicScalar) -> SymbolicScalar {
        let mut by_level: BTreeMap<u32, SymbolicScalar> = BTreeMap::new();
        let mut acc = SymbolicScalar::zero();
        for (m, c) in &self.terms {
            let mut prod = SymbolicScalar::rational(c.clone());
            for (v, e) in &m.0 {
                let factor = if v.name() == name {
                    by_level
                        .entry(v.level())
                        .or_insert_with(|| value.superderivative_n(v.level() as usize))
                        .clone()
                } else {
                    SymbolicScalar::var(v.clone())
                };
                let factor = if *e < 0 {
                    factor.try_inverse().expect("substituted value must be invertible")
                } else {
                    factor
                };
                for _ in 0..e.unsigned_abs() {
                    prod = prod.times(&factor);
                }
            }
            acc = acc.plus(&prod);
        }
        acc
    }

    fn mul_monomial_into(
        terms: &mut BTreeMap<Monomial, Q>,
        a: &Monomial,
        b: &Monomial,
        c: Q,
    ) {
        if let Some((m, negative)) = a.mul(b) {
            Self::accumulate(terms, m, if negative { -c } else { c });
        }
    }

    fn d_monomial(m: &Monomial, c: &Q, out: &mut BTreeMap<Monomial, Q>) {
        let mut before = Parity::Even;
        for (idx, (v, e)) in m.0.iter().enumerate() {
            if let Some(dv) = v.d() {
                let prefix = Monomial(m.0[..idx].to_vec());
                let suffix = Monomial(m.0[idx + 1..].to_vec());
                let mut middle = Vec::new();
                if *e != 1 {
                    middle.push((v.clone(), e - 1));
                }
                let mid = Monomial(middle);
                let mut coef = c * q(*e as i64);
                if before.is_odd() {
                    coef = -coef;
                }
                // prefix · (v^{e-1} · Dv) · suffix
                let mut tmp = BTreeMap::new();
                Self::mul_monomial_into(&mut tmp, &prefix, &mid, Q::one());
                let mut tmp2 = BTreeMap::new();
                for (pm, pc) in tmp {
                    Self::mul_monomial_into(&mut tmp2, &pm, &Monomial::var(dv.clone()), pc);
                }
                for (pm, pc) in tmp2 {
                    Self::mul_monomial_into(out, &pm, &suffix, pc * &coef);
                }
            }
            before = before + v.parity();
        }
    }

    /// Unique term free of odd variables, if there is exactly one.
    fn body_term(&self) -> Option<(&Monomial, &Q)> {
        let mut body = self.terms.iter().filter(|(m, _)| !m.has_odd_factor());
        let first = body.next()?;
        body.next().is_none().then_some(first)
    }
}

impl Scalar for SymbolicScalar {
    fn zero_like(&self) -> Self {
        SymbolicScalar::zero()
    }

    fn rational_like(&self, c: &Q) -> Self {
        SymbolicScalar::rational(c.clone())
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn plus(&self, rhs: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            Self::accumulate(&mut terms, m.clone(), c.clone());
        }
        SymbolicScalar { terms }
    }

    fn minus(&self, rhs: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            Self::accumulate(&mut terms, m.clone(), -c);
        }
        SymbolicScalar { terms }
    }

    fn times(&self, rhs: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                Self::mul_monomial_into(&mut terms, ma, mb, ca * cb);
            }
        }
        SymbolicScalar { terms }
    }

    fn negate(&self) -> Self {
        SymbolicScalar {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return SymbolicScalar::zero();
        }
        SymbolicScalar {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    fn superderivative(&self) -> Self {
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            Self::d_monomial(m, c, &mut out);
        }
        SymbolicScalar { terms: out }
    }

    fn parity_involution(&self) -> Self {
        SymbolicScalar {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), if m.parity().is_odd() { -c } else { c.clone() }))
                .collect(),
        }
    }

    fn has_parity(&self, p: Parity) -> bool {
        self.terms.keys().all(|m| m.parity() == p)
    }

    /// Invertible when the odd-free part is a single Laurent monomial
    /// `c·u`; the rest is then nilpotent and the geometric series ends.
    fn try_inverse(&self) -> Result<Self> {
        let Some((u, c)) = self.body_term() else {
            return Err(Error::NotInvertible(format!(
                "symbolic scalar {self} has no monomial body"
            )));
        };
        let t_inv = SymbolicScalar::term(u.inverse_even(), c.recip());
        let step = SymbolicScalar::one().minus(&self.times(&t_inv));
        let mut acc = SymbolicScalar::one();
        let mut power = SymbolicScalar::one();
        loop {
            power = power.times(&step);
            if power.is_zero() {
                break;
            }
            acc = acc.plus(&power);
        }
        Ok(acc.times(&t_inv))
    }

    fn is_unit(&self) -> bool {
        self.body_term().is_some()
    }

    fn is_constant(&self) -> bool {
        self.terms
            .keys()
            .all(|m| m.0.iter().all(|(v, _)| v.kind() == VarKind::Constant))
    }
}

impl fmt::Debug for SymbolicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Symbolic({self})")
    }
}

impl fmt::Display for SymbolicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (c.clone(), monomial_factors(m)));
        f.write_str(&crate::print::join_terms(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn odd(n: &str) -> SymbolicScalar {
        SymbolicScalar::symbol(n, Parity::Odd)
    }

    fn even(n: &str) -> SymbolicScalar {
        SymbolicScalar::symbol(n, Parity::Even)
    }

    #[test]
    fn odd_symbols_anticommute() {
        let (a, c) = (odd("a1"), odd("c1"));
        assert!(a.times(&c).plus(&c.times(&a)).is_zero());
        assert!(a.times(&a).is_zero());
        assert_eq!(c.times(&a).to_string(), "-a1*c1");
    }

    #[test]
    fn odd_constants_square_to_zero() {
        let l1 = SymbolicScalar::constant("l1", Parity::Odd);
        let l2 = SymbolicScalar::constant("l2", Parity::Odd);
        let p = SymbolicScalar::one().plus(&l1.times(&l2));
        let m = SymbolicScalar::one().minus(&l1.times(&l2));
        assert_eq!(p.times(&m), SymbolicScalar::one());
        assert!(l1.superderivative().is_zero());
    }

    #[test]
    fn jets_shift_under_d() {
        let a = odd("a1");
        assert_eq!(a.superderivative().to_string(), "D(a1)");
        assert_eq!(a.superderivative_n(3).to_string(), "D^3(a1)");
        assert!(a.superderivative().has_parity(Parity::Even));
    }

    #[test]
    fn d_is_an_odd_derivation() {
        let f = odd("a1").times(&even("u")).plus(&even("a2"));
        let g = odd("c1").plus(&odd("a3").times(&even("u")));
        for (x, y) in [(&f, &g), (&g, &f)] {
            let (xe, xo) = x.split_parity();
            for (part, sign) in [(xe, false), (xo, true)] {
                let lhs = part.times(y).superderivative();
                let mut rhs2 = part.times(&y.superderivative());
                if sign {
                    rhs2 = rhs2.negate();
                }
                let rhs = part.superderivative().times(y).plus(&rhs2);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn substitution_respects_jets() {
        let expr = odd("a1").superderivative().times(&even("u"));
        let sub = expr.substitute("a1", &odd("c1").times(&even("v")));
        let direct = odd("c1")
            .times(&even("v"))
            .superderivative()
            .times(&even("u"));
        assert_eq!(sub, direct);
    }

    #[test]
    fn even_symbols_are_laurent_units() {
        let a = even("a11");
        let inv = a.try_inverse().unwrap();
        assert_eq!(inv.to_string(), "a11^-1");
        assert_eq!(a.times(&inv), SymbolicScalar::one());
        let f = a.plus(&odd("b").times(&odd("c")));
        assert_eq!(f.times(&f.try_inverse().unwrap()), SymbolicScalar::one());
        assert!(even("a").plus(&even("b")).try_inverse().is_err());
        // D(a^-1) = -a^-2 Da
        let d = inv.superderivative();
        let expected = a.superderivative().times(&inv).times(&inv).negate();
        assert_eq!(d, expected);
    }

    #[test]
    fn natural_name_order() {
        let e = even("a10").plus(&even("a2"));
        assert_eq!(e.to_string(), "a2 + a10");
    }
}
