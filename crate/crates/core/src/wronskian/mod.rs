//! Superjets, Wroński matrices and the reconstruction of a monic operator
//! from a basis of its kernel.

use crate::error::{Error, Result};
use crate::scalars::{Parity, Scalar};
use crate::superop::SuperDiffOp;
use crate::supermatrix::{ber, ber_star, solve_row_cramer, FormatMatrix, Line, MatrixFormat};

/// `(f, Df, …, Dⁿf)` as a column in the alternating format.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperJet<S: Scalar> {
    coords: Vec<S>,
}

impl<S: Scalar> SuperJet<S> {
    pub fn new(base: &S, depth: usize) -> Self {
        let mut coords = Vec::with_capacity(depth + 1);
        let mut cur = base.clone();
        for _ in 0..depth {
            let next = cur.superderivative();
            coords.push(cur);
            cur = next;
        }
        coords.push(cur);
        SuperJet { coords }
    }

    pub fn base(&self) -> &S {
        &self.coords[0]
    }

    pub fn depth(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    /// Position parities `0, 1, 0, …`.
    pub fn format(&self) -> Vec<Parity> {
        (0..self.coords.len()).map(Parity::from).collect()
    }
}

fn check_alternating<S: Scalar>(fs: &[S]) -> Result<()> {
    if fs.is_empty() {
        return Err(Error::DimensionMismatch("empty function family".into()));
    }
    for (i, f) in fs.iter().enumerate() {
        let p = Parity::from(i);
        if !f.has_parity(p) {
            return Err(Error::ParityMismatch(format!(
                "function {i} must be {p}, got {f}"
            )));
        }
    }
    Ok(())
}

/// `W^i_j = Dⁱφ_j` for `i, j < n`, alternating formats on both sides.
pub fn wronski_matrix<S: Scalar>(fs: &[S]) -> Result<FormatMatrix<S>> {
    check_alternating(fs)?;
    let n = fs.len();
    let jets: Vec<SuperJet<S>> = fs.iter().map(|f| SuperJet::new(f, n - 1)).collect();
    let entries = (0..n)
        .map(|i| jets.iter().map(|j| j.coords[i].clone()).collect())
        .collect();
    FormatMatrix::new(entries, MatrixFormat::alternating(n))
}

/// `(Dⁿφ₀, …, Dⁿφ_{n−1})`, the row just below the Wroński matrix.
pub fn next_row<S: Scalar>(fs: &[S]) -> Vec<S> {
    fs.iter().map(|f| f.superderivative_n(fs.len())).collect()
}

/// `W(φ₀, …) = Ber` of the Wroński matrix.
pub fn wronskian<S: Scalar>(fs: &[S]) -> Result<S> {
    ber(&wronski_matrix(fs)?)
}

/// `W*(φ₀, …) = Ber*` of the Wroński matrix.
pub fn wronskian_star<S: Scalar>(fs: &[S]) -> Result<S> {
    ber_star(&wronski_matrix(fs)?)
}

fn general_position(e: Error) -> Error {
    match e {
        Error::BerUndefined(m)
        | Error::BerStarUndefined(m)
        | Error::SingularMatrix(m)
        | Error::NotInvertible(m) => Error::KernelNotInGeneralPosition(m),
        other => other,
    }
}

/// The monic operator of order `n` annihilating `φ₀, …, φ_{n−1}`.
///
/// Solves `x·W = −(Dⁿφ_j)_j` for `x_i = a_{n−i}` by the row Cramer rule.
pub fn reconstruct_operator<S: Scalar>(basis: &[S]) -> Result<SuperDiffOp<S>> {
    let w = wronski_matrix(basis)?;
    let rhs: Vec<S> = next_row(basis).iter().map(|v| v.negate()).collect();
    let x = solve_row_cramer(&w, &rhs).map_err(general_position)?;
    let lower: Vec<S> = x.into_iter().rev().collect();
    Ok(SuperDiffOp::monic(&basis[0], lower))
}

/// `[a₁, …, a_n]` from Berezinians of row-replaced Wroński matrices:
/// `a_k = −Ber(W, row n−k → Dⁿφ)/W` when row `n−k` is even and
/// `−Ber*(W, row n−k → Dⁿφ)/W*` when it is odd.
pub fn coefficient_formulas<S: Scalar>(basis: &[S]) -> Result<Vec<S>> {
    let w = wronski_matrix(basis)?;
    let n = basis.len();
    let top = next_row(basis);
    let mut w_inv = None;
    let mut w_star_inv = None;
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        let i = n - k;
        let row_parity = Parity::from(i);
        let wrong = (row_parity != Parity::from(n)).then_some(Line::Row(i));
        let replaced = w.replace_row(i, top.clone(), wrong);
        let a = if row_parity.is_even() {
            if w_inv.is_none() {
                w_inv = Some(ber(&w).and_then(|v| v.try_inverse()).map_err(general_position)?);
            }
            ber(&replaced)?.times(w_inv.as_ref().unwrap())
        } else {
            if w_star_inv.is_none() {
                w_star_inv =
                    Some(ber_star(&w).and_then(|v| v.try_inverse()).map_err(general_position)?);
            }
            ber_star(&replaced)?.times(w_star_inv.as_ref().unwrap())
        };
        out.push(a.negate());
    }
    Ok(out)
}

/// Wroński matrix with its last row bumped to `Dⁿφ`, a wrong line.
fn bumped<S: Scalar>(fs: &[S]) -> Result<FormatMatrix<S>> {
    let w = wronski_matrix(fs)?;
    let n = fs.len();
    Ok(w.replace_row(n - 1, next_row(fs), Some(Line::Row(n - 1))))
}

/// `DW` by the bumped-row formulas: `Ber` of the bumped matrix for an odd
/// number of functions, `−W²·Ber*` of it for an even number.
pub fn d_wronskian<S: Scalar>(basis: &[S]) -> Result<S> {
    let b = bumped(basis)?;
    if basis.len() % 2 == 1 {
        ber(&b)
    } else {
        let w = wronskian(basis)?;
        Ok(w.times(&w).times(&ber_star(&b)?).negate())
    }
}

/// For an odd number of functions, `a₁ = −DW·W⁻¹`.
pub fn first_coefficient<S: Scalar>(basis: &[S]) -> Result<S> {
    if basis.len().is_multiple_of(2) {
        return Err(Error::DimensionMismatch(
            "the Wronskian form of a1 needs an odd number of functions".into(),
        ));
    }
    let w_inv = wronskian(basis)
        .and_then(|w| w.try_inverse())
        .map_err(general_position)?;
    Ok(d_wronskian(basis)?.times(&w_inv).negate())
}

/// `Mf` through Wronskian quotients: `W*(φ…, f)/W*(φ…)` for odd `n` and odd
/// `f`, `W(φ…, f)/W(φ…)` for even `n` and even `f`.
pub fn apply_by_wronskians<S: Scalar>(basis: &[S], f: &S) -> Result<S> {
    let n = basis.len();
    let p = Parity::from(n);
    if !f.has_parity(p) {
        return Err(Error::ParityMismatch(format!(
            "the quotient formula for {n} functions acts on {p} functions, got {f}"
        )));
    }
    let mut ext = basis.to_vec();
    ext.push(f.clone());
    let (num, den) = if p.is_odd() {
        (wronskian_star(&ext)?, wronskian_star(basis)?)
    } else {
        (wronskian(&ext)?, wronskian(basis)?)
    };
    Ok(num.times(&den.try_inverse().map_err(general_position)?))
}
