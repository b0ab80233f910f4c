//! Exact supercommutative scalars.
//!
//! Two models implement [`Scalar`]: [`SuperFunction`] (concrete functions
//! with truncated power-series components) and [`SymbolicScalar`]
//! (polynomials in jets `Dᵏs` of declared symbols). Both are closed under
//! the odd derivation `D = ∂_ξ + ξ∂_x`.

pub mod grassmann;
pub mod series;
pub mod superfunction;
pub mod symbolic;

use std::fmt;
use std::ops::Add;

use num_rational::BigRational;

pub use grassmann::{Grassmann, Mask};
pub use series::Series;
pub use superfunction::SuperFunction;
pub use symbolic::{Monomial, SymbolicScalar, Var};

use crate::error::Result;

/// Exact rational numbers.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn is_even(self) -> bool {
        self == Parity::Even
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn bit(self) -> usize {
        self as usize
    }

    /// `(-1)^{self·other}` as a boolean "negate".
    pub fn sign_with(self, other: Parity) -> bool {
        self.is_odd() && other.is_odd()
    }
}

impl From<usize> for Parity {
    fn from(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl Add for Parity {
    type Output = Parity;

    fn add(self, rhs: Parity) -> Parity {
        Parity::from(self.bit() + rhs.bit())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Highest power of `x` kept in concrete series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Truncation(pub usize);

impl Truncation {
    /// Number of known coefficients, `x^0 ..= x^order`.
    pub fn prec(self) -> usize {
        self.0 + 1
    }
}

pub const DEFAULT_TRUNCATION: Truncation = Truncation(16);

impl Default for Truncation {
    fn default() -> Self {
        DEFAULT_TRUNCATION
    }
}

pub(crate) fn default_generator_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("l{i}")).collect()
}

/// Supercommutative scalar model with an odd derivation `D`.
///
/// Products follow the Koszul rule, `fg = (-1)^{f̃g̃} gf` for homogeneous
/// elements. Elements need not be homogeneous; [`Scalar::split_parity`]
/// separates the parts.
pub trait Scalar: Clone + fmt::Debug + fmt::Display + PartialEq + Send + Sync + 'static {
    /// Zero of the same model (and precision, for series).
    fn zero_like(&self) -> Self;
    fn rational_like(&self, q: &Q) -> Self;
    fn one_like(&self) -> Self {
        self.rational_like(&q(1))
    }
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negate(&self) -> Self;
    fn scale(&self, q: &Q) -> Self;
    /// The odd derivation `D`.
    fn superderivative(&self) -> Self;
    /// `(-1)^{parity}` extended linearly.
    fn parity_involution(&self) -> Self;
    /// Every component has parity `p` (zero has every parity).
    fn has_parity(&self, p: Parity) -> bool;
    fn try_inverse(&self) -> Result<Self>;
    /// Invertible elements: the body is a non-zero rational.
    fn is_unit(&self) -> bool;
    /// Annihilated by `D`.
    fn is_constant(&self) -> bool;
    /// Known precision for truncated models; `None` when exact.
    fn precision(&self) -> Option<usize> {
        None
    }

    fn parity(&self) -> Option<Parity> {
        if self.has_parity(Parity::Even) {
            Some(Parity::Even)
        } else if self.has_parity(Parity::Odd) {
            Some(Parity::Odd)
        } else {
            None
        }
    }

    /// `(even part, odd part)`.
    fn split_parity(&self) -> (Self, Self) {
        if self.has_parity(Parity::Even) {
            return (self.clone(), self.zero_like());
        }
        if self.has_parity(Parity::Odd) {
            return (self.zero_like(), self.clone());
        }
        let a = self.parity_involution();
        let half = frac(1, 2);
        (self.plus(&a).scale(&half), self.minus(&a).scale(&half))
    }

    /// `Dᵏ f`.
    fn superderivative_n(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |acc, _| acc.superderivative())
    }
}
