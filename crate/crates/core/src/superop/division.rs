//! Division with remainder by a non-degenerate operator.
//!
//! Two implementations per side. The elimination route subtracts one
//! Leibniz-expanded term `c Dʲ∘M` at a time; the recurrence route
//! recomputes the full product with [`SuperDiffOp::compose_naive`] before
//! reading off each quotient coefficient. They share no code beyond the
//! leading-coefficient rule, so agreement is a meaningful check.

use super::{alpha_pow, SuperDiffOp};
use crate::error::{Error, Result};
use crate::scalars::Scalar;

/// Inverse of the top coefficient of `M`.
fn check_divisor<S: Scalar>(m: &SuperDiffOp<S>) -> Result<S> {
    m.top().try_inverse().map_err(|_| {
        Error::DegenerateDivisor(format!("top coefficient {} of {m} is not invertible", m.top()))
    })
}

/// Quotient coefficient `c` with `c·Dʲ∘M` matching `t·Dʲ⁺ᵏ` at the top:
/// `c·αʲ(m₀) = t`.
fn right_leading<S: Scalar>(t: &S, m0_inv: &S, j: usize) -> S {
    t.times(&alpha_pow(m0_inv, j))
}

/// `M∘(c·Dʲ)` has top term `m₀·αᵏ(c)`, so `c = αᵏ(m₀⁻¹ t)`.
fn left_leading<S: Scalar>(t: &S, m0_inv: &S, k: usize) -> S {
    alpha_pow(&m0_inv.times(t), k)
}

fn quotient_order<S: Scalar>(n: &SuperDiffOp<S>, m: &SuperDiffOp<S>) -> Option<usize> {
    n.order().checked_sub(m.order())
}

/// `N = Q∘M + R` with `ord R < ord M`.
pub fn divide_right<S: Scalar>(
    n: &SuperDiffOp<S>,
    m: &SuperDiffOp<S>,
) -> Result<(SuperDiffOp<S>, SuperDiffOp<S>)> {
    let m0_inv = check_divisor(m)?;
    let k = m.order();
    let zero = n.template().zero_like();
    let Some(qord) = quotient_order(n, m) else {
        return Ok((SuperDiffOp::zero(&zero, 0), n.below(k)));
    };
    let mut rem = n.clone();
    let mut q = vec![zero.clone(); qord + 1];
    for j in (0..=qord).rev() {
        let t = rem.power_coeff(j + k);
        if t.is_zero() {
            continue;
        }
        let c = right_leading(&t, &m0_inv, j);
        rem = rem.sub(&SuperDiffOp::monomial(c.clone(), j).compose(m));
        q[j] = c;
    }
    Ok((SuperDiffOp::from_powers(q), rem.below(k)))
}

/// Same result as [`divide_right`], computed by the recurrence route.
pub fn divide_right_recurrence<S: Scalar>(
    n: &SuperDiffOp<S>,
    m: &SuperDiffOp<S>,
) -> Result<(SuperDiffOp<S>, SuperDiffOp<S>)> {
    let m0_inv = check_divisor(m)?;
    let k = m.order();
    let zero = n.template().zero_like();
    let Some(qord) = quotient_order(n, m) else {
        return Ok((SuperDiffOp::zero(&zero, 0), n.below(k)));
    };
    let mut q = vec![zero.clone(); qord + 1];
    for j in (0..=qord).rev() {
        let partial = SuperDiffOp::from_powers(q.clone());
        let t = n.sub(&partial.compose_naive(m)).power_coeff(j + k);
        q[j] = right_leading(&t, &m0_inv, j);
    }
    let q = SuperDiffOp::from_powers(q);
    let r = n.sub(&q.compose_naive(m));
    Ok((q, r.below(k)))
}

/// `N = M∘Q + R` with `ord R < ord M`.
pub fn divide_left<S: Scalar>(
    n: &SuperDiffOp<S>,
    m: &SuperDiffOp<S>,
) -> Result<(SuperDiffOp<S>, SuperDiffOp<S>)> {
    let m0_inv = check_divisor(m)?;
    let k = m.order();
    let zero = n.template().zero_like();
    let Some(qord) = quotient_order(n, m) else {
        return Ok((SuperDiffOp::zero(&zero, 0), n.below(k)));
    };
    let mut rem = n.clone();
    let mut q = vec![zero.clone(); qord + 1];
    for j in (0..=qord).rev() {
        let t = rem.power_coeff(j + k);
        if t.is_zero() {
            continue;
        }
        let c = left_leading(&t, &m0_inv, k);
        rem = rem.sub(&m.compose(&SuperDiffOp::monomial(c.clone(), j)));
        q[j] = c;
    }
    Ok((SuperDiffOp::from_powers(q), rem.below(k)))
}

/// Same result as [`divide_left`], computed by the recurrence route.
pub fn divide_left_recurrence<S: Scalar>(
    n: &SuperDiffOp<S>,
    m: &SuperDiffOp<S>,
) -> Result<(SuperDiffOp<S>, SuperDiffOp<S>)> {
    let m0_inv = check_divisor(m)?;
    let k = m.order();
    let zero = n.template().zero_like();
    let Some(qord) = quotient_order(n, m) else {
        return Ok((SuperDiffOp::zero(&zero, 0), n.below(k)));
    };
    let mut q = vec![zero.clone(); qord + 1];
    for j in (0..=qord).rev() {
        let partial = SuperDiffOp::from_powers(q.clone());
        let t = n.sub(&m.compose_naive(&partial)).power_coeff(j + k);
        q[j] = left_leading(&t, &m0_inv, k);
    }
    let q = SuperDiffOp::from_powers(q);
    let r = n.sub(&m.compose_naive(&q));
    Ok((q, r.below(k)))
}
