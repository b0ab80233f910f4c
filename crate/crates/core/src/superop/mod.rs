//! The ring DO(1|1) of differential operators `a₀Dᵐ + a₁Dᵐ⁻¹ + … + a_m`.
//!
//! Sign conventions: coefficients multiply from the left, so `a·Dᵏ` applied
//! to `f` is `a·(Dᵏf)` with no extra sign, and moving `Dᵏ` past a
//! coefficient follows the super-Leibniz rule
//! `Dᵏ∘f = Σ_p ⟨k, p⟩ (−1)^{(k−p)f̃} (Dᵖf) Dᵏ⁻ᵖ`. Solution spaces of
//! operators are right modules over the constants.

pub mod binomial;
pub mod division;

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalars::{Parity, Scalar, Q};
pub use binomial::{superbinomial, SuperBinomialTable};
pub use division::{divide_left, divide_left_recurrence, divide_right, divide_right_recurrence};

/// `α^j(f)`: the parity involution applied `j` times.
pub(crate) fn alpha_pow<S: Scalar>(f: &S, j: usize) -> S {
    if j % 2 == 1 {
        f.parity_involution()
    } else {
        f.clone()
    }
}

/// Differential operator with declared order `m = coeffs.len() - 1`.
#[derive(Clone)]
pub struct SuperDiffOp<S: Scalar> {
    /// `coeffs[k]` multiplies `D^{m-k}`.
    coeffs: Vec<S>,
}

impl<S: Scalar> SuperDiffOp<S> {
    /// From `[a₀, …, a_m]`, top coefficient first.
    pub fn new(coeffs: Vec<S>) -> Self {
        assert!(!coeffs.is_empty(), "an operator needs at least one coefficient");
        SuperDiffOp { coeffs }
    }

    /// Monic operator `Dᵐ + a₁Dᵐ⁻¹ + … + a_m` from `[a₁, …, a_m]`.
    pub fn monic(template: &S, lower: Vec<S>) -> Self {
        let mut coeffs = vec![template.one_like()];
        coeffs.extend(lower);
        SuperDiffOp { coeffs }
    }

    /// From coefficients indexed by the power of `D`.
    pub fn from_powers(mut by_power: Vec<S>) -> Self {
        by_power.reverse();
        Self::new(by_power)
    }

    /// Multiplication by a function, an operator of order 0.
    pub fn scalar(f: S) -> Self {
        SuperDiffOp { coeffs: vec![f] }
    }

    /// `Dᵏ`.
    pub fn d_power(template: &S, k: usize) -> Self {
        let mut coeffs = vec![template.zero_like(); k + 1];
        coeffs[0] = template.one_like();
        SuperDiffOp { coeffs }
    }

    /// `f·Dᵏ`.
    pub fn monomial(f: S, k: usize) -> Self {
        let mut coeffs = vec![f.zero_like(); k + 1];
        coeffs[0] = f;
        SuperDiffOp { coeffs }
    }

    pub fn zero(template: &S, order: usize) -> Self {
        SuperDiffOp {
            coeffs: vec![template.zero_like(); order + 1],
        }
    }

    /// Declared order.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Highest power with a non-zero coefficient; `None` for zero.
    pub fn effective_order(&self) -> Option<usize> {
        (0..=self.order()).rev().find(|&p| !self.power_coeff(p).is_zero())
    }

    /// `[a₀, …, a_m]`.
    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// `a_k`, the coefficient of `D^{m-k}`.
    pub fn coeff(&self, k: usize) -> &S {
        &self.coeffs[k]
    }

    pub fn top(&self) -> &S {
        &self.coeffs[0]
    }

    /// Coefficient of `Dᵖ` (zero above the declared order).
    pub fn power_coeff(&self, p: usize) -> S {
        let m = self.order();
        if p > m {
            self.coeffs[0].zero_like()
        } else {
            self.coeffs[m - p].clone()
        }
    }

    pub fn template(&self) -> &S {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_monic(&self) -> bool {
        self.top().minus(&self.top().one_like()).is_zero()
    }

    /// The top coefficient is invertible.
    pub fn is_non_degenerate(&self) -> bool {
        self.top().is_unit()
    }

    /// Parity `P` such that every `a_k Dᵐ⁻ᵏ` has parity `P`, if any.
    pub fn parity(&self) -> Option<Parity> {
        let m = self.order();
        [Parity::Even, Parity::Odd].into_iter().find(|&p| {
            self.coeffs
                .iter()
                .enumerate()
                .all(|(k, a)| a.has_parity(p + Parity::from(m - k)))
        })
    }

    /// Same operator with declared order raised to `order`.
    pub fn with_order(&self, order: usize) -> Self {
        assert!(order >= self.order(), "with_order cannot lower the order");
        let mut coeffs = vec![self.template().zero_like(); order - self.order()];
        coeffs.extend(self.coeffs.iter().cloned());
        SuperDiffOp { coeffs }
    }

    /// Drops leading zero coefficients (keeps at least order 0).
    pub fn trimmed(&self) -> Self {
        let keep = self.effective_order().unwrap_or(0);
        let m = self.order();
        SuperDiffOp {
            coeffs: self.coeffs[m - keep..].to_vec(),
        }
    }

    /// Coefficient vector truncated to powers below `order`, used for
    /// remainders.
    pub(crate) fn below(&self, order: usize) -> Self {
        let top = order.max(1) - 1;
        let by_power: Vec<S> = (0..=top)
            .map(|p| {
                if p < order {
                    self.power_coeff(p)
                } else {
                    self.template().zero_like()
                }
            })
            .collect();
        Self::from_powers(by_power)
    }

    pub fn map_coeffs(&self, f: impl Fn(&S) -> S) -> Self {
        SuperDiffOp {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    fn zip_powers(&self, rhs: &Self, f: impl Fn(&S, &S) -> S) -> Self {
        let order = self.order().max(rhs.order());
        Self::from_powers(
            (0..=order)
                .map(|p| f(&self.power_coeff(p), &rhs.power_coeff(p)))
                .collect(),
        )
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.zip_powers(rhs, |a, b| a.plus(b))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.zip_powers(rhs, |a, b| a.minus(b))
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|a| a.negate())
    }

    pub fn scale(&self, c: &Q) -> Self {
        self.map_coeffs(|a| a.scale(c))
    }

    /// `A + f` for a function `f` (order-0 shift, e.g. `L − λ`).
    pub fn add_scalar(&self, f: &S) -> Self {
        self.add(&Self::scalar(f.clone()))
    }

    /// `f∘A`: every coefficient multiplied from the left.
    pub fn left_mul(&self, f: &S) -> Self {
        self.map_coeffs(|a| f.times(a))
    }

    /// `A f = Σ a_k · Dᵐ⁻ᵏ f`.
    pub fn apply(&self, f: &S) -> S {
        let m = self.order();
        let mut acc = f.zero_like();
        let mut jet = f.clone();
        for p in 0..=m {
            let a = &self.coeffs[m - p];
            if !a.is_zero() {
                acc = acc.plus(&a.times(&jet));
            }
            if p < m {
                jet = jet.superderivative();
            }
        }
        acc
    }

    /// `A∘B` by the super-Leibniz rule.
    pub fn compose(&self, rhs: &Self) -> Self {
        let (m, n) = (self.order(), rhs.order());
        let mut out = vec![self.template().zero_like(); m + n + 1];
        for q in 0..=n {
            let b = rhs.power_coeff(q);
            if b.is_zero() {
                continue;
            }
            // jets[j % 2][i] = Dⁱ(αʲ b)
            let mut jets: [Vec<S>; 2] = [vec![b.clone()], vec![b.parity_involution()]];
            for p in 0..=m {
                let a = self.power_coeff(p);
                if a.is_zero() {
                    continue;
                }
                let row = SuperBinomialTable::shared_row(p);
                for (i, c) in row.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let j = p - i;
                    let parity = j % 2;
                    while jets[parity].len() <= i {
                        let next = jets[parity].last().unwrap().superderivative();
                        jets[parity].push(next);
                    }
                    let term = a.times(&jets[parity][i]).scale(&Q::from_integer(c.clone()));
                    out[q + j] = out[q + j].plus(&term);
                }
            }
        }
        Self::from_powers(out)
    }

    /// `A∘B` by repeated use of `D∘(f Dᵏ) = (Df) Dᵏ + (−1)^{f̃} f Dᵏ⁺¹`;
    /// independent of the superbinomial table.
    pub fn compose_naive(&self, rhs: &Self) -> Self {
        let m = self.order();
        let n = rhs.order();
        let mut out = vec![self.template().zero_like(); m + n + 1];
        // cur = Dᵖ∘B as power-indexed coefficients
        let mut cur: Vec<S> = (0..=n).map(|q| rhs.power_coeff(q)).collect();
        for p in 0..=m {
            let a = self.power_coeff(p);
            if !a.is_zero() {
                for (k, c) in cur.iter().enumerate() {
                    out[k] = out[k].plus(&a.times(c));
                }
            }
            if p < m {
                let mut next = vec![self.template().zero_like(); cur.len() + 1];
                for (k, c) in cur.iter().enumerate() {
                    next[k] = next[k].plus(&c.superderivative());
                    next[k + 1] = next[k + 1].plus(&c.parity_involution());
                }
                cur = next;
            }
        }
        Self::from_powers(out)
    }

    /// `g⁻¹∘A∘g`.
    pub fn gauge(&self, g: &S) -> Result<Self> {
        let ginv = g.try_inverse()?;
        Ok(Self::scalar(ginv)
            .compose(self)
            .compose(&Self::scalar(g.clone())))
    }

    /// Formats with a custom coefficient printer.
    pub fn render(&self, coeff: &dyn Fn(&S) -> String) -> String {
        let m = self.order();
        let mut out = String::new();
        for (k, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let p = m - k;
            let text = coeff(a);
            let (negative, body) = term_text(&text, p);
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

fn d_text(p: usize) -> String {
    match p {
        1 => "D".to_string(),
        _ => format!("D^{p}"),
    }
}

/// Splits a coefficient's text into sign and `coeff*D^p` body.
fn term_text(coeff: &str, p: usize) -> (bool, String) {
    let tail = coeff.get(1..).unwrap_or("");
    let multi = tail.contains(" + ") || tail.contains(" - ");
    if multi && p > 0 {
        return (false, format!("({coeff})*{}", d_text(p)));
    }
    let (negative, abs) = split_sign(coeff);
    let body = match (p, abs.as_str()) {
        (0, _) => abs,
        (_, "1") => d_text(p),
        _ => format!("{abs}*{}", d_text(p)),
    };
    (negative, body)
}

fn split_sign(text: &str) -> (bool, String) {
    match text.strip_prefix('-') {
        Some(rest) => (true, rest.to_string()),
        None => (false, text.to_string()),
    }
}

/// Coefficient-wise equality over all powers; declared orders may differ.
impl<S: Scalar> PartialEq for SuperDiffOp<S> {
    fn eq(&self, other: &Self) -> bool {
        let order = self.order().max(other.order());
        (0..=order).all(|p| self.power_coeff(p) == other.power_coeff(p))
    }
}

impl<S: Scalar> fmt::Display for SuperDiffOp<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&|a| a.to_string()))
    }
}

impl<S: Scalar> fmt::Debug for SuperDiffOp<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SuperDiffOp[{}]({self})", self.order())
    }
}

/// `M_φ = D − (Dφ)φ⁻¹ = φ∘D∘φ⁻¹`, which annihilates `φ`.
pub fn m_phi<S: Scalar>(phi: &S) -> Result<SuperDiffOp<S>> {
    if !phi.has_parity(Parity::Even) {
        return Err(Error::ParityMismatch(format!("M_phi needs an even function, got {phi}")));
    }
    let inv = phi.try_inverse()?;
    let a1 = phi.superderivative().times(&inv).negate();
    Ok(SuperDiffOp::monic(phi, vec![a1]))
}

/// `L = a₀ · F₁∘F₂∘…∘F_m` with first-order monic factors.
#[derive(Clone, Debug)]
pub struct Factorization<S: Scalar> {
    pub leading: S,
    /// In composition order: `factors[0]` is leftmost.
    pub factors: Vec<SuperDiffOp<S>>,
}

impl<S: Scalar> Factorization<S> {
    pub fn recompose(&self) -> SuperDiffOp<S> {
        self.factors
            .iter()
            .fold(SuperDiffOp::scalar(self.leading.clone()), |acc, f| acc.compose(f))
    }
}

/// Splits off `M_{φ₁}` on the right, then `M_{φ₂}` from the quotient, and
/// so on. `flag[i]` must lie in the kernel of the `i`-th quotient.
pub fn factorize<S: Scalar>(l: &SuperDiffOp<S>, flag: &[S]) -> Result<Factorization<S>> {
    if flag.len() != l.order() {
        return Err(Error::DimensionMismatch(format!(
            "operator of order {} needs {} flag functions, got {}",
            l.order(),
            l.order(),
            flag.len()
        )));
    }
    if !l.is_non_degenerate() {
        return Err(Error::DegenerateOperator(format!("top coefficient of {l}")));
    }
    let mut current = l.clone();
    let mut right_to_left = Vec::with_capacity(flag.len());
    for (i, phi) in flag.iter().enumerate() {
        if !current.apply(phi).is_zero() {
            return Err(Error::NotAKernelElement(format!(
                "flag function {i} ({phi}) is not annihilated by {current}"
            )));
        }
        let m = m_phi(phi)?;
        let (q, r) = divide_right(&current, &m)?;
        if !r.is_zero() {
            return Err(Error::NotAKernelElement(format!(
                "division by M for flag function {i} leaves remainder {r}"
            )));
        }
        right_to_left.push(m);
        current = q;
    }
    right_to_left.reverse();
    Ok(Factorization {
        leading: current.coeff(0).clone(),
        factors: right_to_left,
    })
}
