//! Concrete functions `f(x, ξ) = f⁰(x) + ξ f¹(x)` on the superline.

use std::fmt;

use num_traits::{One, Zero};

use super::grassmann::Grassmann;
use super::series::{series_terms, Series};
use super::{Parity, Scalar, Truncation, Q};
use crate::error::{Error, Result};

/// A function on the superline with truncated power-series components.
///
/// `ξ` is structural: it is the split into `f0` and `f1`, always written on
/// the left (`f = f0 + ξ·f1`). Odd constants live inside the series
/// coefficients.
#[derive(Clone, PartialEq)]
pub struct SuperFunction {
    f0: Series,
    f1: Series,
}

impl SuperFunction {
    pub fn new(f0: Series, f1: Series) -> Self {
        SuperFunction { f0, f1 }
    }

    /// A function of `x` alone.
    pub fn from_series(f0: Series) -> Self {
        let prec = f0.prec();
        SuperFunction { f0, f1: Series::zero(prec) }
    }

    pub fn zero(t: Truncation) -> Self {
        Self::from_series(Series::zero(t.prec()))
    }

    pub fn one(t: Truncation) -> Self {
        Self::rational(Q::one(), t)
    }

    pub fn rational(q: Q, t: Truncation) -> Self {
        Self::from_series(Series::rational(q, t.prec()))
    }

    pub fn integer(n: i64, t: Truncation) -> Self {
        Self::rational(Q::from_integer(n.into()), t)
    }

    pub fn constant(g: &Grassmann, t: Truncation) -> Self {
        Self::from_series(Series::constant(g, t.prec()))
    }

    /// Odd constant generator `λ_{index+1}`.
    pub fn generator(index: usize, t: Truncation) -> Self {
        Self::constant(&Grassmann::generator(index), t)
    }

    pub fn x(t: Truncation) -> Self {
        Self::from_series(Series::x(t.prec()))
    }

    pub fn xi(t: Truncation) -> Self {
        SuperFunction {
            f0: Series::zero(t.prec()),
            f1: Series::rational(Q::one(), t.prec()),
        }
    }

    /// `Σ c_k x^k` with rational coefficients.
    pub fn polynomial(coeffs: &[i64], t: Truncation) -> Self {
        let gs: Vec<Grassmann> = coeffs.iter().map(|c| Grassmann::integer(*c)).collect();
        Self::from_series(Series::from_coeffs(&gs, t.prec()))
    }

    pub fn f0(&self) -> &Series {
        &self.f0
    }

    pub fn f1(&self) -> &Series {
        &self.f1
    }

    /// Smallest precision of the two components.
    pub fn prec(&self) -> usize {
        self.f0.prec().min(self.f1.prec())
    }

    pub fn truncated(&self, prec: usize) -> Self {
        SuperFunction {
            f0: self.f0.truncated(prec),
            f1: self.f1.truncated(prec),
        }
    }

    /// `∂/∂x` applied to both components.
    pub fn dx(&self) -> Self {
        SuperFunction {
            f0: self.f0.derivative(),
            f1: self.f1.derivative(),
        }
    }

    /// True when the function is a Grassmann constant (no `x`, no `ξ`).
    pub fn is_constant(&self) -> bool {
        self.f1.is_zero() && self.f0.is_constant()
    }

    /// Value of a constant function; fails if it depends on `x` or `ξ`.
    pub fn as_constant(&self) -> Result<Grassmann> {
        if !self.is_constant() {
            return Err(Error::NotConstant(format!("{self}")));
        }
        self.f0.constant_term()
    }

    /// Value at `x = 0, ξ = 0`.
    pub fn value_at_origin(&self) -> Result<Grassmann> {
        self.f0.constant_term()
    }

    pub fn mul_constant(&self, g: &Grassmann) -> Self {
        // g·ξ = ξ·α(g)
        SuperFunction {
            f0: self.f0.mul_constant(g),
            f1: self.f1.mul_constant(&g.parity_involution()),
        }
    }

    /// Right multiplication by a constant.
    pub fn mul_constant_right(&self, g: &Grassmann) -> Self {
        let c = Series::constant(g, self.prec().max(1));
        SuperFunction {
            f0: self.f0.mul(&c).truncated(self.f0.prec()),
            f1: self.f1.mul(&c).truncated(self.f1.prec()),
        }
    }
}

impl Scalar for SuperFunction {
    fn zero_like(&self) -> Self {
        SuperFunction {
            f0: Series::zero(self.f0.prec()),
            f1: Series::zero(self.f1.prec()),
        }
    }

    fn rational_like(&self, q: &Q) -> Self {
        let prec = self.f0.prec().max(self.f1.prec());
        SuperFunction::from_series(Series::rational(q.clone(), prec))
    }

    fn is_zero(&self) -> bool {
        self.f0.is_zero() && self.f1.is_zero()
    }

    fn plus(&self, rhs: &Self) -> Self {
        SuperFunction {
            f0: self.f0.add(&rhs.f0),
            f1: self.f1.add(&rhs.f1),
        }
    }

    fn minus(&self, rhs: &Self) -> Self {
        SuperFunction {
            f0: self.f0.sub(&rhs.f0),
            f1: self.f1.sub(&rhs.f1),
        }
    }

    fn times(&self, rhs: &Self) -> Self {
        // (f0 + ξ f1)(g0 + ξ g1) = f0 g0 + ξ (f1 g0 + α(f0) g1)
        let f0 = self.f0.mul(&rhs.f0);
        let f1 = self
            .f1
            .mul(&rhs.f0)
            .add(&self.f0.parity_involution().mul(&rhs.f1));
        SuperFunction { f0, f1 }
    }

    fn negate(&self) -> Self {
        SuperFunction {
            f0: self.f0.neg(),
            f1: self.f1.neg(),
        }
    }

    fn scale(&self, q: &Q) -> Self {
        SuperFunction {
            f0: self.f0.scale(q),
            f1: self.f1.scale(q),
        }
    }

    /// `D f = f¹ + ξ ∂ₓf⁰`.
    fn superderivative(&self) -> Self {
        SuperFunction {
            f0: self.f1.clone(),
            f1: self.f0.derivative(),
        }
    }

    fn parity_involution(&self) -> Self {
        SuperFunction {
            f0: self.f0.parity_involution(),
            f1: self.f1.parity_involution().neg(),
        }
    }

    fn has_parity(&self, p: Parity) -> bool {
        self.f0.has_parity(p) && self.f1.has_parity(p.flip())
    }

    fn try_inverse(&self) -> Result<Self> {
        let u0 = self.f0.inverse()?;
        let a0inv = self.f0.parity_involution().inverse()?;
        let u1 = a0inv.mul(&self.f1).mul(&u0).neg();
        Ok(SuperFunction { f0: u0, f1: u1 })
    }

    fn is_unit(&self) -> bool {
        matches!(self.f0.body(), Ok(b) if !b.is_zero())
    }

    fn is_constant(&self) -> bool {
        SuperFunction::is_constant(self)
    }

    fn precision(&self) -> Option<usize> {
        Some(self.prec())
    }
}

impl fmt::Debug for SuperFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SuperFunction({self} ; prec {}|{})", self.f0.prec(), self.f1.prec())
    }
}

impl fmt::Display for SuperFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = super::default_generator_names(super::grassmann::MAX_GENERATORS);
        f.write_str(&format_superfunction(self, &names))
    }
}

pub(crate) fn format_superfunction(s: &SuperFunction, names: &[String]) -> String {
    let mut terms = series_terms(&s.f0, names, None);
    terms.extend(series_terms(&s.f1, names, Some("xi")));
    crate::print::join_terms(terms)
}
