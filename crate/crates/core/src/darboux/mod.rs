//! Darboux transformations `ML₀ = L₁M` between monic operators.
//!
//! Elementary transformations come from even eigenfunctions, longer ones
//! are factorized through a flag of an invariant subspace, and
//! [`dressing`] derives the coefficient maps symbolically.

pub mod dressing;

use crate::error::{Error, Result};
use crate::kernel::kernel_basis;
use crate::scalars::{Scalar, SuperFunction, Truncation};
use crate::superop::{divide_right, m_phi, SuperDiffOp};
use crate::supermatrix::solve_cramer;
use crate::wronskian::{reconstruct_operator, wronski_matrix};

pub use dressing::{
    derive_dressing, derive_dressing_generic, dressing_patterns, elementary_dressing, mu_symbol,
    DressingOrder, DressingResult, PatternReport,
};

/// `L₀ = Q∘M_φ + λ  →  L₁ = M_φ∘Q + α(λ)`.
///
/// `M_φ∘λ = α(λ)∘M_φ` for a constant `λ`, so an odd eigenvalue changes
/// sign on the way to `L₁`.
#[derive(Clone, Debug)]
pub struct ElementaryDT<S: Scalar> {
    pub phi: S,
    pub lambda: S,
    pub m: SuperDiffOp<S>,
    pub quotient: SuperDiffOp<S>,
    pub l0: SuperDiffOp<S>,
    pub l1: SuperDiffOp<S>,
}

/// `M∘L₀ − L₁∘M`; zero exactly for a Darboux triple.
pub fn verify_intertwining<S: Scalar>(
    l0: &SuperDiffOp<S>,
    l1: &SuperDiffOp<S>,
    m: &SuperDiffOp<S>,
) -> SuperDiffOp<S> {
    m.compose(l0).sub(&l1.compose(m))
}

/// Elementary transformation built on the even invertible eigenfunction
/// `φ`. The eigenvalue is read off the remainder of `L₀ ÷ M_φ`; when
/// `lambda` is given it must match.
pub fn elementary_dt<S: Scalar>(
    l0: &SuperDiffOp<S>,
    phi: &S,
    lambda: Option<&S>,
) -> Result<ElementaryDT<S>> {
    if !l0.is_non_degenerate() {
        return Err(Error::DegenerateOperator(format!("top coefficient of {l0}")));
    }
    let m = m_phi(phi)?;
    let (quotient, rem) = divide_right(l0, &m)?;
    let value = rem.power_coeff(0);
    if !value.is_constant() {
        return Err(Error::RemainderNotConstant(format!(
            "{phi} is not an eigenfunction: L0 = Q o M + {value}"
        )));
    }
    if let Some(l) = lambda {
        if &value != l {
            return Err(Error::RemainderNotConstant(format!(
                "{phi} has eigenvalue {value}, not {l}"
            )));
        }
    }
    let l1 = m.compose(&quotient).add_scalar(&value.parity_involution());
    Ok(ElementaryDT {
        phi: phi.clone(),
        lambda: value,
        m,
        quotient,
        l0: l0.clone(),
        l1,
    })
}

/// `L₀ → L₁ → … → L_r` with `M = M_r∘…∘M₁`.
#[derive(Clone, Debug)]
pub struct DarbouxChain<S: Scalar> {
    pub steps: Vec<ElementaryDT<S>>,
    pub composed: SuperDiffOp<S>,
}

impl<S: Scalar> DarbouxChain<S> {
    pub fn l0(&self) -> &SuperDiffOp<S> {
        &self.steps[0].l0
    }

    pub fn lr(&self) -> &SuperDiffOp<S> {
        &self.steps[self.steps.len() - 1].l1
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

fn not_in_general_position(e: Error) -> Error {
    match e {
        Error::KernelNotInGeneralPosition(m)
        | Error::BerUndefined(m)
        | Error::BerStarUndefined(m)
        | Error::SingularMatrix(m)
        | Error::NotInvertible(m) => Error::FlagNotInGeneralPosition(m),
        other => other,
    }
}

/// Triangular action of `L₀` on the flag: column `i` holds constants
/// `κ_{ji}` with `L₀φ_i = Σ_{j≤i} φ_j κ_{ji}`.
pub fn flag_action<S: Scalar>(l0: &SuperDiffOp<S>, flag: &[S]) -> Result<Vec<Vec<S>>> {
    let mut action = Vec::with_capacity(flag.len());
    for i in 0..flag.len() {
        let head = &flag[..=i];
        let w = wronski_matrix(head)?;
        let g = l0.apply(&flag[i]);
        let jet: Vec<S> = (0..=i).map(|k| g.superderivative_n(k)).collect();
        let kappa = solve_cramer(&w, &jet).map_err(not_in_general_position)?;
        if let Some((j, k)) = kappa.iter().enumerate().find(|(_, k)| !k.is_constant()) {
            return Err(Error::NotInvariantFlag(format!(
                "L0 applied to flag function {i} has a non-constant component {k} along function {j}"
            )));
        }
        action.push(kappa);
    }
    Ok(action)
}

/// Factorizes the transformation attached to an invariant flag into
/// elementary steps: split off `M_{φ₀}`, push the rest of the flag
/// through it, and repeat on `L₁`.
pub fn factorize_dt<S: Scalar>(l0: &SuperDiffOp<S>, flag: &[S]) -> Result<DarbouxChain<S>> {
    if flag.is_empty() {
        return Err(Error::DimensionMismatch("empty flag".into()));
    }
    flag_action(l0, flag)?;
    let mut current_l = l0.clone();
    let mut current: Vec<S> = flag.to_vec();
    let mut steps = Vec::with_capacity(flag.len());
    while let Some(phi) = current.first().cloned() {
        if !phi.is_unit() {
            return Err(Error::FlagNotInGeneralPosition(format!(
                "leading eigenfunction {phi} at step {} is not invertible",
                steps.len() + 1
            )));
        }
        let step = elementary_dt(&current_l, &phi, None).map_err(|e| match e {
            Error::RemainderNotConstant(m) => Error::NotInvariantFlag(m),
            other => other,
        })?;
        current = current[1..].iter().map(|f| step.m.apply(f)).collect();
        current_l = step.l1.clone();
        steps.push(step);
    }
    let one = SuperDiffOp::scalar(l0.template().one_like());
    let composed = steps.iter().fold(one, |acc, s| s.m.compose(&acc));
    Ok(DarbouxChain { steps, composed })
}

/// The monic `M` with kernel spanned by the flag, by the Wronskian route.
pub fn dt_from_invariant_subspace<S: Scalar>(
    l0: &SuperDiffOp<S>,
    flag: &[S],
) -> Result<SuperDiffOp<S>> {
    flag_action(l0, flag)?;
    reconstruct_operator(flag).map_err(not_in_general_position)
}

/// Even `g` with `g(0) = 1` such that `g⁻¹Lg` has no `D^{2m−2}` term, for
/// `L` of even order `2m`: the even kernel element of `mD² + a₁D + a₂`.
pub fn second_coefficient_gauge(
    l: &SuperDiffOp<SuperFunction>,
    t: Truncation,
) -> Result<SuperFunction> {
    let n = l.order();
    if n < 2 || n % 2 == 1 || !l.is_monic() {
        return Err(Error::DimensionMismatch(format!(
            "needs a monic operator of even order, got order {n}"
        )));
    }
    let m = (n / 2) as i64;
    let mid = l.template().rational_like(&crate::scalars::q(m));
    let aux = SuperDiffOp::new(vec![mid, l.coeff(1).clone(), l.coeff(2).clone()]);
    let basis = kernel_basis(&aux, t)?;
    Ok(basis[0].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::eigenfunctions;
    use crate::scalars::Parity;

    const T: Truncation = Truncation(14);
    const K: Truncation = Truncation(12);

    fn one() -> SuperFunction {
        SuperFunction::one(T)
    }

    fn xi() -> SuperFunction {
        SuperFunction::xi(T)
    }

    fn l(i: usize) -> SuperFunction {
        SuperFunction::generator(i, T)
    }

    #[test]
    fn autotransformation_of_dx() {
        let dx = SuperDiffOp::d_power(&one(), 2);
        let dt = elementary_dt(&dx, &one(), Some(&one().zero_like())).unwrap();
        assert_eq!(dt.l1, dx);
        assert!(verify_intertwining(&dx, &dx, &SuperDiffOp::d_power(&one(), 1)).is_zero());
    }

    #[test]
    fn first_order_constant_shift() {
        // L0 = D + a1 with odd constant a1; φ = 1 + ξκ has Dφ = κφ
        let a1 = l(0);
        let kappa = l(1);
        let l0 = SuperDiffOp::monic(&one(), vec![a1.clone()]);
        let phi = one().plus(&xi().times(&kappa));
        let dt = elementary_dt(&l0, &phi, None).unwrap();
        let mu = dt.m.coeff(1).clone();
        let lam = mu.minus(&a1);
        assert_eq!(dt.l1.coeff(1), &a1.negate().plus(&mu.scale(&crate::scalars::q(2))));
        assert_eq!(dt.l1.coeff(1), &a1.plus(&lam.scale(&crate::scalars::q(2))));
        assert!(verify_intertwining(&dt.l0, &dt.l1, &dt.m).is_zero());
    }

    #[test]
    fn dx_plus_a2_has_only_autotransformations() {
        let a2 = SuperFunction::polynomial(&[0, 1, 2], T).plus(&xi().times(&l(0)));
        let l0 = SuperDiffOp::monic(&one(), vec![one().zero_like(), a2]);
        let phi = eigenfunctions(&l0, &SuperFunction::integer(3, T), K).unwrap()[0].clone();
        let dt = elementary_dt(&l0, &phi, None).unwrap();
        assert_eq!(dt.l1, l0);
    }

    #[test]
    fn non_eigenfunction_is_rejected() {
        let dx = SuperDiffOp::d_power(&one(), 2);
        let phi = SuperFunction::polynomial(&[1, 0, 1], T);
        assert!(matches!(
            elementary_dt(&dx, &phi, None),
            Err(Error::RemainderNotConstant(_))
        ));
    }

    #[test]
    fn perturbed_triple_has_residual() {
        let dx = SuperDiffOp::d_power(&one(), 2);
        let m = SuperDiffOp::monic(&one(), vec![SuperFunction::x(T)]);
        assert!(!verify_intertwining(&dx, &dx, &m).is_zero());
    }

    #[test]
    fn factorize_dx_with_flag_one_xi() {
        let dx = SuperDiffOp::d_power(&one(), 2);
        let chain = factorize_dt(&dx, &[one(), xi()]).unwrap();
        assert_eq!(chain.len(), 2);
        assert_eq!(chain.composed, dx);
        assert_eq!(dt_from_invariant_subspace(&dx, &[one(), xi()]).unwrap(), dx);
        assert_eq!(dt_from_invariant_subspace(&dx, &[one()]).unwrap(), SuperDiffOp::d_power(&one(), 1));
    }

    #[test]
    fn chain_on_an_eigenspace() {
        let x = SuperFunction::x(T);
        let a1 = xi().times(&SuperFunction::x(T)).plus(&l(1));
        let a2 = SuperFunction::polynomial(&[1, 1], T);
        let l0 = SuperDiffOp::monic(&one(), vec![a1, a2]);
        let flag = eigenfunctions(&l0, &x.zero_like().plus(&SuperFunction::integer(2, T)), K).unwrap();
        let chain = factorize_dt(&l0, &flag).unwrap();
        for s in &chain.steps {
            assert!(verify_intertwining(&s.l0, &s.l1, &s.m).is_zero());
        }
        assert!(verify_intertwining(chain.l0(), chain.lr(), &chain.composed).is_zero());
        assert_eq!(chain.composed, dt_from_invariant_subspace(&l0, &flag).unwrap());
    }

    #[test]
    fn odd_operator_flag_order_three() {
        // L0 = D³ + λ₁: constants on the right of the flag keep the
        // triangular action sign-free even though L0 is odd.
        let l0 = SuperDiffOp::monic(&one(), vec![one().zero_like(), one().zero_like(), l(0)]);
        let phi0 = one();
        let phi1 = xi();
        let action = flag_action(&l0, &[phi0.clone(), phi1.clone()]).unwrap();
        assert_eq!(action[0], vec![l(0)]);
        assert_eq!(action[1], vec![one().zero_like(), l(0).negate()]);
        let chain = factorize_dt(&l0, &[phi0, phi1]).unwrap();
        for s in &chain.steps {
            assert!(verify_intertwining(&s.l0, &s.l1, &s.m).is_zero());
        }
        // D∘(D³ + λ₁) = (D³ − λ₁)∘D
        assert_eq!(chain.steps[0].l1.coeff(3), &l(0).negate());
        assert!(verify_intertwining(chain.l0(), chain.lr(), &chain.composed).is_zero());
        assert_eq!(chain.composed, SuperDiffOp::d_power(&one(), 2));
    }

    #[test]
    fn non_invariant_flag() {
        let dx = SuperDiffOp::d_power(&one(), 2);
        let flag = [one(), xi().times(&SuperFunction::polynomial(&[1, 1], T))];
        assert!(matches!(factorize_dt(&dx, &flag), Err(Error::NotInvariantFlag(_))));
        let flag = [SuperFunction::x(T), xi()];
        assert!(matches!(
            factorize_dt(&dx, &flag),
            Err(Error::NotInvariantFlag(_)) | Err(Error::FlagNotInGeneralPosition(_))
        ));
    }

    #[test]
    fn magnetic_term_is_gauged_away() {
        let x = SuperFunction::x(T);
        let a2 = SuperFunction::polynomial(&[1, 2], T).plus(&xi().times(&l(0)));
        let a3 = xi().plus(&l(1).times(&x));
        let a4 = SuperFunction::polynomial(&[0, 0, 1], T);
        let l0 = SuperDiffOp::monic(&one(), vec![one().zero_like(), a2, a3, a4]);
        let g = second_coefficient_gauge(&l0, K).unwrap();
        assert!(g.has_parity(Parity::Even));
        let gl = l0.gauge(&g).unwrap();
        assert!(gl.coeff(1).is_zero());
        assert!(gl.coeff(2).is_zero(), "{}", gl.coeff(2));
    }
}
