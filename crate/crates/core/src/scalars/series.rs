//! Truncated power series in `x` with coefficients in the Grassmann constants.
//!
//! Every series carries a precision `prec`: coefficients of `x^k` for
//! `k < prec` are known exactly, everything from `x^prec` on is unknown
//! (an implicit `O(x^prec)`). Differentiation lowers the precision by one;
//! products keep what the factors determine. Reading a coefficient at or past
//! the precision fails with [`Error::TruncationExceeded`] instead of
//! returning a silently truncated value.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::grassmann::{mask_parity, monomial_product_sign, Grassmann, Mask};
use super::{Parity, Q};
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct Series {
    /// Generator mask -> rational coefficients of `x^0, x^1, …`.
    terms: BTreeMap<Mask, Vec<Q>>,
    prec: usize,
}

impl Series {
    pub fn zero(prec: usize) -> Self {
        Series { terms: BTreeMap::new(), prec }
    }

    pub fn constant(g: &Grassmann, prec: usize) -> Self {
        let mut s = Series::zero(prec);
        for (m, q) in g.terms() {
            s.terms.insert(m, vec![q.clone()]);
        }
        s.normalized()
    }

    pub fn rational(q: Q, prec: usize) -> Self {
        Self::constant(&Grassmann::rational(q), prec)
    }

    /// The coordinate `x`.
    pub fn x(prec: usize) -> Self {
        Self::monomial(1, &Grassmann::one(), prec)
    }

    /// `g·x^power`.
    pub fn monomial(power: usize, g: &Grassmann, prec: usize) -> Self {
        let mut s = Series::zero(prec);
        for (m, q) in g.terms() {
            let mut v = vec![Q::zero(); power + 1];
            v[power] = q.clone();
            s.terms.insert(m, v);
        }
        s.normalized()
    }

    /// Series from Grassmann coefficients of `x^0, x^1, …`.
    pub fn from_coeffs(coeffs: &[Grassmann], prec: usize) -> Self {
        let mut terms: BTreeMap<Mask, Vec<Q>> = BTreeMap::new();
        for (k, g) in coeffs.iter().enumerate() {
            for (m, q) in g.terms() {
                let v = terms.entry(m).or_default();
                if v.len() <= k {
                    v.resize(k + 1, Q::zero());
                }
                v[k] = q.clone();
            }
        }
        Series { terms, prec }.normalized()
    }

    fn normalized(mut self) -> Self {
        let prec = self.prec;
        self.terms.retain(|_, v| {
            v.truncate(prec);
            while v.last().is_some_and(|q| q.is_zero()) {
                v.pop();
            }
            !v.is_empty()
        });
        self
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    /// Same value with precision lowered to `prec` (never raised).
    pub fn truncated(&self, prec: usize) -> Self {
        Series {
            terms: self.terms.clone(),
            prec: prec.min(self.prec),
        }
        .normalized()
    }

    /// Known-zero test: every coefficient below the precision vanishes.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Order of the first non-zero coefficient; `prec` if none is known.
    pub fn valuation(&self) -> usize {
        self.terms
            .values()
            .filter_map(|v| v.iter().position(|q| !q.is_zero()))
            .min()
            .unwrap_or(self.prec)
    }

    pub fn degree_bound(&self) -> usize {
        self.terms.values().map(|v| v.len()).max().unwrap_or(0)
    }

    /// Coefficient of `x^k`.
    pub fn coeff(&self, k: usize) -> Result<Grassmann> {
        if k >= self.prec {
            return Err(Error::TruncationExceeded(format!(
                "coefficient of x^{k} requested from a series known to O(x^{})",
                self.prec
            )));
        }
        Ok(self.coeff_or_zero(k))
    }

    pub(crate) fn coeff_or_zero(&self, k: usize) -> Grassmann {
        let mut g = Grassmann::zero();
        for (m, v) in &self.terms {
            if let Some(q) = v.get(k) {
                g = g.add(&Grassmann::monomial(*m, q.clone()));
            }
        }
        g
    }

    pub fn constant_term(&self) -> Result<Grassmann> {
        self.coeff(0)
    }

    /// Rational part of the constant term; decides invertibility.
    pub fn body(&self) -> Result<Q> {
        if self.prec == 0 {
            return Err(Error::TruncationExceeded(
                "body of a series with no known coefficients".into(),
            ));
        }
        Ok(self
            .terms
            .get(&0)
            .and_then(|v| v.first().cloned())
            .unwrap_or_else(Q::zero))
    }

    /// True when no positive power of `x` occurs (to the known precision).
    pub fn is_constant(&self) -> bool {
        self.terms.values().all(|v| v.len() <= 1)
    }

    pub fn masks(&self) -> impl Iterator<Item = (Mask, &[Q])> + '_ {
        self.terms.iter().map(|(m, v)| (*m, v.as_slice()))
    }

    pub fn has_parity(&self, p: Parity) -> bool {
        self.terms.keys().all(|m| mask_parity(*m) == p)
    }

    pub fn parity_involution(&self) -> Self {
        let mut out = self.clone();
        for (m, v) in out.terms.iter_mut() {
            if mask_parity(*m).is_odd() {
                for q in v.iter_mut() {
                    *q = -q.clone();
                }
            }
        }
        out
    }

    fn combine(&self, rhs: &Self, sign: bool) -> Self {
        let prec = self.prec.min(rhs.prec);
        let mut terms = self.terms.clone();
        for (m, v) in &rhs.terms {
            let dst = terms.entry(*m).or_default();
            if dst.len() < v.len() {
                dst.resize(v.len(), Q::zero());
            }
            for (d, q) in dst.iter_mut().zip(v) {
                if sign {
                    *d -= q;
                } else {
                    *d += q;
                }
            }
        }
        Series { terms, prec }.normalized()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.combine(rhs, false)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.combine(rhs, true)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            for q in v.iter_mut() {
                *q = -q.clone();
            }
        }
        out
    }

    pub fn scale(&self, q: &Q) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            for c in v.iter_mut() {
                *c *= q;
            }
        }
        out.normalized()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let (va, vb) = (self.valuation(), rhs.valuation());
        let prec = (self.prec + vb)
            .min(rhs.prec + va)
            .min(self.prec.max(rhs.prec));
        let small_rhs: Vec<(Mask, Vec<Small>)> = rhs
            .terms
            .iter()
            .map(|(m, v)| (*m, v.iter().map(small).collect()))
            .collect();
        let mut acc: BTreeMap<Mask, Vec<Acc>> = BTreeMap::new();
        for (ma, a) in &self.terms {
            let sa: Vec<Small> = a.iter().map(small).collect();
            for ((mb, b), (_, sb)) in rhs.terms.iter().zip(&small_rhs) {
                let Some(negative) = monomial_product_sign(*ma, *mb) else {
                    continue;
                };
                let len = (a.len() + b.len() - 1).min(prec);
                let dst = acc.entry(ma | mb).or_default();
                if dst.len() < len {
                    dst.resize(len, Acc::default());
                }
                for (i, qa) in a.iter().enumerate().take(len) {
                    if qa.is_zero() {
                        continue;
                    }
                    for (j, qb) in b.iter().enumerate().take(len - i) {
                        if !qb.is_zero() {
                            dst[i + j].add_product(qa, sa[i], qb, sb[j], negative);
                        }
                    }
                }
            }
        }
        let terms = acc
            .into_iter()
            .map(|(m, v)| (m, v.into_iter().map(Acc::value).collect()))
            .collect();
        Series { terms, prec }.normalized()
    }

    /// Left multiplication by a constant.
    pub fn mul_constant(&self, g: &Grassmann) -> Self {
        Series::constant(g, self.prec.max(1)).mul(self).truncated(self.prec)
    }

    /// `d/dx`; the result is known to one order less.
    pub fn derivative(&self) -> Self {
        let prec = self.prec.saturating_sub(1);
        let mut terms = BTreeMap::new();
        for (m, v) in &self.terms {
            let d: Vec<Q> = v
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, q)| q * Q::from_integer((k as i64).into()))
                .collect();
            terms.insert(*m, d);
        }
        Series { terms, prec }.normalized()
    }

    /// Multiplicative inverse: the rational body series is inverted by the
    /// usual recurrence, the nilpotent remainder by a finite geometric sum.
    pub fn inverse(&self) -> Result<Self> {
        let body = self.body()?;
        if body.is_zero() {
            return Err(Error::NotInvertible(format!(
                "series {self} has zero constant body"
            )));
        }
        let prec = self.prec;
        let h: Vec<Q> = self.terms.get(&0).cloned().unwrap_or_default();
        let mut inv = vec![Q::zero(); prec];
        let b0 = body.recip();
        for k in 0..prec {
            let mut acc = if k == 0 { Q::one() } else { Q::zero() };
            for j in 1..=k.min(h.len().saturating_sub(1)) {
                acc -= &h[j] * &inv[k - j];
            }
            inv[k] = acc * &b0;
        }
        let mut hinv = Series::zero(prec);
        hinv.terms.insert(0, inv);
        let hinv = hinv.normalized();

        let mut nil = self.clone();
        nil.terms.remove(&0);
        if nil.is_zero() {
            return Ok(hinv);
        }
        let step = nil.mul(&hinv).neg();
        let mut acc = Series::rational(Q::one(), prec);
        let mut power = acc.clone();
        loop {
            power = power.mul(&step);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        Ok(hinv.mul(&acc).truncated(prec))
    }
}

type Small = Option<(i128, i128)>;

fn small(q: &Q) -> Small {
    Some((q.numer().to_i64()? as i128, q.denom().to_i64()? as i128))
}

/// A sum of rational products kept as an unreduced fraction, in `i128`
/// while it fits and in big integers after that; reduced once at the end.
#[derive(Clone)]
struct Acc {
    num: i128,
    den: i128,
    big: Option<(BigInt, BigInt)>,
}

impl Default for Acc {
    fn default() -> Self {
        Acc {
            num: 0,
            den: 1,
            big: None,
        }
    }
}

impl Acc {
    fn add_product(&mut self, a: &Q, sa: Small, b: &Q, sb: Small, negative: bool) {
        if let (Some((na, da)), Some((nb, db))) = (sa, sb) {
            let (tn, td) = (na * nb, da * db);
            let tn = if negative { -tn } else { tn };
            if self.den == td {
                if let Some(n) = self.num.checked_add(tn) {
                    self.num = n;
                    return;
                }
            } else if let (Some(x), Some(y), Some(d)) = (
                self.num.checked_mul(td),
                tn.checked_mul(self.den),
                self.den.checked_mul(td),
            ) {
                if let Some(n) = x.checked_add(y) {
                    self.num = n;
                    self.den = d;
                    return;
                }
            }
        }
        let tn = a.numer() * b.numer();
        let tn = if negative { -tn } else { tn };
        let td = a.denom() * b.denom();
        let (n, d) = self
            .big
            .take()
            .unwrap_or_else(|| (BigInt::zero(), BigInt::one()));
        self.big = Some(if d == td {
            (n + tn, d)
        } else {
            (n * &td + tn * &d, d * td)
        });
    }

    fn value(self) -> Q {
        let small = Q::new(self.num.into(), self.den.into());
        match self.big {
            Some((n, d)) => small + Q::new(n, d),
            None => small,
        }
    }
}

/// Agreement on every commonly known coefficient.
impl PartialEq for Series {
    fn eq(&self, other: &Self) -> bool {
        let p = self.prec.min(other.prec);
        self.truncated(p).terms == other.truncated(p).terms
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} + O(x^{})", self.prec)
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = crate::scalars::default_generator_names(super::grassmann::MAX_GENERATORS);
        f.write_str(&format_series(self, &names, None))
    }
}

/// Terms ordered by power of `x`, then by generator mask. An optional
/// leading factor (used for `xi`) is placed before every term.
pub(crate) fn series_terms(
    s: &Series,
    names: &[String],
    lead: Option<&str>,
) -> Vec<(Q, Vec<String>)> {
    let mut by_power: BTreeMap<usize, Vec<(Mask, Q)>> = BTreeMap::new();
    for (m, v) in &s.terms {
        for (k, q) in v.iter().enumerate() {
            if !q.is_zero() {
                by_power.entry(k).or_default().push((*m, q.clone()));
            }
        }
    }
    let mut out = Vec::new();
    for (k, entries) in by_power {
        for (m, q) in entries {
            let mut factors: Vec<String> = lead.map(|l| vec![l.to_string()]).unwrap_or_default();
            factors.extend(super::grassmann::format_mask(m, names));
            match k {
                0 => {}
                1 => factors.push("x".into()),
                _ => factors.push(format!("x^{k}")),
            }
            out.push((q, factors));
        }
    }
    out
}

pub(crate) fn format_series(s: &Series, names: &[String], lead: Option<&str>) -> String {
    crate::print::join_terms(series_terms(s, names, lead))
}
