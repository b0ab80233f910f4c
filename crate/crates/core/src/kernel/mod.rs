//! Kernels of non-degenerate operators as truncated series.
//!
//! `Lφ = 0` for monic `L` of order `m` is the first-order system `Dφ̂ = Γφ̂`
//! on the superjet `φ̂ = (φ, Dφ, …, D^{m−1}φ)`. Writing `φ̂ = φ̂₀ + ξφ̂₁` and
//! `Γ = Γ₀ + ξΓ₁` gives
//!
//! ```text
//! φ̂₁ = Γ₀φ̂₀,    φ̂₀′ = (Γ₁ + α(Γ₀)Γ₀) φ̂₀,
//! ```
//!
//! an ordinary linear system solved degree by degree from `φ̂₀(0) = e_i`.

use crate::error::{Error, Result};
use crate::scalars::{Grassmann, Parity, Q, Scalar, Series, SuperFunction, Truncation};
use crate::superop::SuperDiffOp;
use crate::supermatrix::{FormatMatrix, MatrixFormat};

/// The odd companion matrix `Γ` of a monic operator, alternating format.
#[derive(Clone, Debug)]
pub struct CompanionSystem {
    pub gamma: FormatMatrix<SuperFunction>,
}

impl CompanionSystem {
    pub fn order(&self) -> usize {
        self.gamma.nrows()
    }

    /// `(Γ₀, Γ₁)` with `Γ = Γ₀ + ξΓ₁`.
    pub fn split(&self) -> (Vec<Vec<Series>>, Vec<Vec<Series>>) {
        let g = self.gamma.entries();
        let g0 = g.iter().map(|r| r.iter().map(|e| e.f0().clone()).collect()).collect();
        let g1 = g.iter().map(|r| r.iter().map(|e| e.f1().clone()).collect()).collect();
        (g0, g1)
    }
}

fn monic_form(l: &SuperDiffOp<SuperFunction>) -> Result<SuperDiffOp<SuperFunction>> {
    if !l.is_non_degenerate() {
        return Err(Error::InfiniteDimensionalKernel(format!(
            "top coefficient {} of {l} is not invertible",
            l.top()
        )));
    }
    if l.is_monic() {
        return Ok(l.clone());
    }
    let inv = l.top().try_inverse()?;
    Ok(SuperDiffOp::scalar(inv).compose(l))
}

/// `Γ` with ones above the diagonal and last row `(−a_m, …, −a₁)`.
pub fn companion(l: &SuperDiffOp<SuperFunction>) -> Result<CompanionSystem> {
    let l = monic_form(l)?;
    let m = l.order();
    if m == 0 {
        return Err(Error::DimensionMismatch("order 0 operators have no companion system".into()));
    }
    let t = l.template().zero_like();
    let mut entries = vec![vec![t.clone(); m]; m];
    for (i, row) in entries.iter_mut().enumerate().take(m - 1) {
        row[i + 1] = t.one_like();
    }
    for j in 0..m {
        entries[m - 1][j] = l.coeff(m - j).negate();
    }
    let gamma = FormatMatrix::new(entries, MatrixFormat::alternating(m))?;
    Ok(CompanionSystem { gamma })
}

/// Basis of `Ker L` to precision `t`: `⌈m/2⌉` even and `⌊m/2⌋` odd functions,
/// the `i`-th having superjet `e_i` at the origin (so parity `i mod 2`).
///
/// Coefficients of `L` must be known to at least `t.prec() − 1` terms.
pub fn kernel_basis(l: &SuperDiffOp<SuperFunction>, t: Truncation) -> Result<Vec<SuperFunction>> {
    let monic = monic_form(l)?;
    let m = monic.order();
    if m == 0 {
        return Ok(Vec::new());
    }
    let prec = t.prec();
    let sys = companion(&monic)?;
    let (g0, g1) = sys.split();

    // A = Γ₁ + α(Γ₀)Γ₀, needed through x^{prec−2}.
    let need = prec.saturating_sub(1);
    let mut a_coeffs: Vec<Vec<Vec<Grassmann>>> = vec![vec![Vec::with_capacity(need); m]; m];
    for i in 0..m {
        for j in 0..m {
            let mut s = g1[i][j].clone();
            for (k, g0kj) in g0.iter().map(|r| &r[j]).enumerate() {
                s = s.add(&g0[i][k].parity_involution().mul(g0kj));
            }
            for d in 0..need {
                a_coeffs[i][j].push(s.coeff(d)?);
            }
        }
    }

    let mut basis = Vec::with_capacity(m);
    for start in 0..m {
        // v[k][i]: coefficient of x^k in component i of φ̂₀
        let mut v: Vec<Vec<Grassmann>> = Vec::with_capacity(prec);
        let mut init = vec![Grassmann::zero(); m];
        init[start] = Grassmann::one();
        v.push(init);
        for k in 0..need {
            let mut next = vec![Grassmann::zero(); m];
            for (i, slot) in next.iter_mut().enumerate() {
                let mut acc = Grassmann::zero();
                for d in 0..=k {
                    for j in 0..m {
                        acc = acc.add(&a_coeffs[i][j][d].mul(&v[k - d][j]));
                    }
                }
                *slot = acc.scale(&Q::new(1.into(), (k as i64 + 1).into()));
            }
            v.push(next);
        }
        let comps: Vec<Series> = (0..m)
            .map(|i| {
                let cs: Vec<Grassmann> = v.iter().map(|row| row[i].clone()).collect();
                Series::from_coeffs(&cs, prec)
            })
            .collect();
        // φ = (φ̂₀)₀ + ξ (Γ₀φ̂₀)₀
        let mut f1 = Series::zero(prec);
        for (j, c) in comps.iter().enumerate() {
            f1 = f1.add(&g0[0][j].mul(c));
        }
        basis.push(SuperFunction::new(comps[0].clone(), f1.truncated(prec)));
    }
    Ok(basis)
}

/// Basis of the `λ`-eigenspace, `Ker(L − λ)`; `λ` must be a constant of
/// the parity of `L`.
pub fn eigenfunctions(
    l: &SuperDiffOp<SuperFunction>,
    lambda: &SuperFunction,
    t: Truncation,
) -> Result<Vec<SuperFunction>> {
    if !lambda.is_constant() {
        return Err(Error::NotConstant(format!("eigenvalue {lambda}")));
    }
    let p = Parity::from(l.order());
    if !lambda.has_parity(p) {
        return Err(Error::ParityMismatch(format!(
            "an operator of order {} needs a {p} eigenvalue, got {lambda}",
            l.order()
        )));
    }
    kernel_basis(&l.add_scalar(&lambda.negate()), t)
}

/// `(#even, #odd)` of a homogeneous family.
pub fn dimension(basis: &[SuperFunction]) -> Result<(usize, usize)> {
    let mut dims = (0, 0);
    for f in basis {
        match f.parity() {
            Some(Parity::Even) if !f.is_zero() => dims.0 += 1,
            Some(Parity::Odd) => dims.1 += 1,
            _ => {
                return Err(Error::ParityMismatch(format!(
                    "basis function {f} is not homogeneous"
                )))
            }
        }
    }
    Ok(dims)
}
