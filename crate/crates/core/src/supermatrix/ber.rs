use super::linalg::{self, det, mat_mul, mat_sub, Mat};
use super::{FormatMatrix, Line, MatrixFormat};
use crate::error::{Error, Result};
use crate::scalars::{Parity, Scalar};

fn check_input<S: Scalar>(a: &FormatMatrix<S>, allowed_wrong: Parity) -> Result<()> {
    if !a.is_square() || a.format.row_dims().0 != a.format.col_class(Parity::Even).len() {
        return Err(Error::DimensionMismatch(format!(
            "Berezinian needs a square n|m format, got rows={} cols={}",
            MatrixFormat::label_text(&a.format.rows),
            MatrixFormat::label_text(&a.format.cols)
        )));
    }
    if let Some(line) = a.wrong {
        let p = match line {
            Line::Row(i) => a.format.rows[i],
            Line::Col(j) => a.format.cols[j],
        };
        if p != allowed_wrong {
            return Err(Error::IllegalWrongness(format!(
                "wrong {p} line {line:?}; only a {allowed_wrong} line may be wrong here"
            )));
        }
    }
    a.check_parity(Parity::Even)
}

fn ber_core<S: Scalar>(a: &FormatMatrix<S>) -> Result<S> {
    let t = a.template();
    let b = a.blocks();
    let det11 = det(&b.a11, &t);
    let det11_inv = det11.try_inverse().map_err(|_| {
        Error::BerUndefined(format!("block A11 has non-invertible determinant {det11}"))
    })?;
    if b.a11.is_empty() {
        return Ok(det(&b.a00, &t));
    }
    let a11_inv = linalg::inverse(&b.a11, &t)
        .map_err(|e| Error::BerUndefined(format!("block A11 is not invertible: {e}")))?;
    let s = mat_sub(&b.a00, &mat_mul(&mat_mul(&b.a01, &a11_inv, &t), &b.a10, &t));
    Ok(det(&s, &t).times(&det11_inv))
}

/// `Ber A = det(A₀₀ − A₀₁A₁₁⁻¹A₁₀) / det A₁₁`.
///
/// `A` must be even, or wrong along one even line (the value is then odd).
pub fn ber<S: Scalar>(a: &FormatMatrix<S>) -> Result<S> {
    check_input(a, Parity::Even)?;
    ber_core(a)
}

/// `det A₀₀ / det(A₁₁ − A₁₀A₀₀⁻¹A₀₁)` for even `A`.
pub fn ber_alt<S: Scalar>(a: &FormatMatrix<S>) -> Result<S> {
    check_input(a, Parity::Even)?;
    if a.wrong.is_some() {
        return Err(Error::IllegalWrongness(
            "the second block formula is used on even matrices only".into(),
        ));
    }
    let t = a.template();
    let b = a.blocks();
    let s = if b.a00.is_empty() {
        b.a11.clone()
    } else {
        let a00_inv = linalg::inverse(&b.a00, &t)
            .map_err(|e| Error::BerUndefined(format!("block A00 is not invertible: {e}")))?;
        mat_sub(&b.a11, &mat_mul(&mat_mul(&b.a10, &a00_inv, &t), &b.a01, &t))
    };
    let ds = det(&s, &t);
    let ds_inv = ds.try_inverse().map_err(|_| {
        Error::BerUndefined(format!("complement of A00 has non-invertible determinant {ds}"))
    })?;
    Ok(det(&b.a00, &t).times(&ds_inv))
}

/// `Ber* A = Ber(A^Π)`; wrong along at most one odd line.
pub fn ber_star<S: Scalar>(a: &FormatMatrix<S>) -> Result<S> {
    check_input(a, Parity::Odd)?;
    ber_core(&a.pi()).map_err(|e| match e {
        Error::BerUndefined(m) => Error::BerStarUndefined(m.replace("A11", "A00")),
        other => other,
    })
}

fn line_parities<S: Scalar>(a: &FormatMatrix<S>, i: usize, j: usize) -> (Parity, Parity) {
    (a.format.rows[i], a.format.cols[j])
}

/// `adj_ij A`: Ber of `A` with row `i` (if even) or column `j` (if even)
/// replaced by a unit vector.
pub fn cofactor<S: Scalar>(a: &FormatMatrix<S>, i: usize, j: usize) -> Result<S> {
    let (pi, pj) = line_parities(a, i, j);
    if pi.is_even() {
        let wrong = pj.is_odd().then_some(Line::Row(i));
        ber(&a.replace_row(i, a.unit_vector(a.ncols(), j), wrong))
    } else if pj.is_even() {
        ber(&a.replace_col(j, a.unit_vector(a.nrows(), i), Some(Line::Col(j))))
    } else {
        Err(Error::CofactorUndefined(format!(
            "adj_({i},{j}) needs an even row or column"
        )))
    }
}

/// `adj*_ij A`: Ber* of `A` with row `i` (if odd) or column `j` (if odd)
/// replaced by a unit vector.
pub fn cofactor_star<S: Scalar>(a: &FormatMatrix<S>, i: usize, j: usize) -> Result<S> {
    let (pi, pj) = line_parities(a, i, j);
    if pi.is_odd() {
        let wrong = pj.is_even().then_some(Line::Row(i));
        ber_star(&a.replace_row(i, a.unit_vector(a.ncols(), j), wrong))
    } else if pj.is_odd() {
        ber_star(&a.replace_col(j, a.unit_vector(a.nrows(), i), Some(Line::Col(j))))
    } else {
        Err(Error::CofactorUndefined(format!(
            "adj*_({i},{j}) needs an odd row or column"
        )))
    }
}

/// Minor formula for even `i`, `j`: `(−1)^{N(i)+N(j)} Ber d_ij(A)`.
pub fn cofactor_minor<S: Scalar>(a: &FormatMatrix<S>, i: usize, j: usize) -> Result<S> {
    let (pi, pj) = line_parities(a, i, j);
    if pi.is_odd() || pj.is_odd() {
        return Err(Error::CofactorUndefined(format!(
            "the minor formula needs even i and j, got ({i},{j})"
        )));
    }
    let v = if a.nrows() == 1 {
        a.template().one_like()
    } else {
        ber(&a.delete(i, j))?
    };
    let sign = (a.format.row_rank(i) + a.format.col_rank(j)) % 2 == 1;
    Ok(if sign { v.negate() } else { v })
}

/// Formula for odd `i`, even `j` on a matrix with equal row and column
/// formats: `−Ber* d_jj(A_{r_i→r_j}) / (Ber* d_jj(A))²`.
pub fn cofactor_odd_even<S: Scalar>(a: &FormatMatrix<S>, i: usize, j: usize) -> Result<S> {
    let (pi, pj) = line_parities(a, i, j);
    if !(pi.is_odd() && pj.is_even()) || a.format.rows != a.format.cols {
        return Err(Error::CofactorUndefined(format!(
            "this formula needs odd i, even j and equal row/column formats, got ({i},{j})"
        )));
    }
    let swapped = a.replace_row(i, a.row(j).to_vec(), Some(Line::Row(i)));
    let num = ber_star(&swapped.delete(j, j))?;
    let den = ber_star(&a.delete(j, j))?;
    let den_inv = den.times(&den).try_inverse()?;
    Ok(num.times(&den_inv).negate())
}

/// `Σ_j a_{i0 j}·adj_{i0 j}A` (even `i0`, equals Ber) or with `adj*`
/// (odd `i0`, equals Ber*).
pub fn expand_row<S: Scalar>(a: &FormatMatrix<S>, i0: usize) -> Result<S> {
    let odd = a.format.rows[i0].is_odd();
    let mut acc = a.template();
    for j in 0..a.ncols() {
        let c = if odd { cofactor_star(a, i0, j)? } else { cofactor(a, i0, j)? };
        acc = acc.plus(&a.get(i0, j).times(&c));
    }
    Ok(acc)
}

/// `Σ_i adj_{i j0}A·a_{i j0}`, with `adj*` for odd `j0`.
pub fn expand_col<S: Scalar>(a: &FormatMatrix<S>, j0: usize) -> Result<S> {
    let odd = a.format.cols[j0].is_odd();
    let mut acc = a.template();
    for i in 0..a.nrows() {
        let c = if odd { cofactor_star(a, i, j0)? } else { cofactor(a, i, j0)? };
        acc = acc.plus(&c.times(a.get(i, j0)));
    }
    Ok(acc)
}

/// Inverse by Gauss–Jordan elimination; rows and columns swap formats.
pub fn inverse_gauss<S: Scalar>(a: &FormatMatrix<S>) -> Result<FormatMatrix<S>> {
    let t = a.template();
    let inv = linalg::inverse(&a.entries, &t)?;
    FormatMatrix::new(
        inv,
        MatrixFormat::new(a.format.cols.clone(), a.format.rows.clone()),
    )
}

/// Inverse from cofactors: `(A⁻¹)_{ji} = adj_ij A / Ber A = adj*_ij A / Ber* A`.
pub fn inverse_cofactor<S: Scalar>(a: &FormatMatrix<S>) -> Result<FormatMatrix<S>> {
    let n = a.nrows();
    let t = a.template();
    let ber_inv = ber(a).and_then(|b| b.try_inverse()).ok();
    let star_inv = ber_star(a).and_then(|b| b.try_inverse()).ok();
    let mut inv: Mat<S> = vec![vec![t.clone(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let (pi, pj) = line_parities(a, i, j);
            let value = match (&ber_inv, &star_inv) {
                (Some(bi), _) if pi.is_even() || pj.is_even() => cofactor(a, i, j)?.times(bi),
                (_, Some(si)) if pi.is_odd() || pj.is_odd() => {
                    cofactor_star(a, i, j)?.times(si)
                }
                _ => {
                    return Err(Error::SingularMatrix(format!(
                        "neither Ber nor Ber* is invertible for entry ({j},{i})"
                    )))
                }
            };
            inv[j][i] = value;
        }
    }
    FormatMatrix::new(
        inv,
        MatrixFormat::new(a.format.cols.clone(), a.format.rows.clone()),
    )
}

/// Solves `A x = b` for a column `x` through the cofactor inverse.
pub fn solve_cramer<S: Scalar>(a: &FormatMatrix<S>, b: &[S]) -> Result<Vec<S>> {
    if b.len() != a.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has {} entries for {} rows",
            b.len(),
            a.nrows()
        )));
    }
    let inv = inverse_cofactor(a)?;
    Ok((0..a.ncols())
        .map(|j| {
            b.iter().enumerate().fold(a.template(), |acc, (i, bi)| {
                acc.plus(&inv.get(j, i).times(bi))
            })
        })
        .collect())
}

/// Parity `P` with `v_j` of parity `P + labels_j` for all `j`.
pub fn vector_parity<S: Scalar>(v: &[S], labels: &[Parity]) -> Option<Parity> {
    [Parity::Even, Parity::Odd]
        .into_iter()
        .find(|&p| v.iter().zip(labels).all(|(e, l)| e.has_parity(p + *l)))
}

/// Solves `x A = b` for a row `x`: `x_i = Ber(A_{r_i→b}) / Ber A` for
/// even rows and `Ber*(A_{r_i→b}) / Ber* A` for odd rows.
pub fn solve_row_cramer<S: Scalar>(a: &FormatMatrix<S>, b: &[S]) -> Result<Vec<S>> {
    if b.len() != a.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has {} entries for {} columns",
            b.len(),
            a.ncols()
        )));
    }
    let bp = vector_parity(b, &a.format.cols)
        .ok_or_else(|| Error::ParityMismatch("right-hand side is not homogeneous".into()))?;
    let mut ber_inv = None;
    let mut star_inv = None;
    let mut x = Vec::with_capacity(a.nrows());
    for i in 0..a.nrows() {
        let p = a.format.rows[i];
        let wrong = (bp != p).then_some(Line::Row(i));
        let replaced = a.replace_row(i, b.to_vec(), wrong);
        let xi = if p.is_even() {
            if ber_inv.is_none() {
                ber_inv = Some(ber(a)?.try_inverse().map_err(|_| {
                    Error::SingularMatrix("Ber of the system matrix is not invertible".into())
                })?);
            }
            ber(&replaced)?.times(ber_inv.as_ref().unwrap())
        } else {
            if star_inv.is_none() {
                star_inv = Some(ber_star(a)?.try_inverse().map_err(|_| {
                    Error::SingularMatrix("Ber* of the system matrix is not invertible".into())
                })?);
            }
            ber_star(&replaced)?.times(star_inv.as_ref().unwrap())
        };
        x.push(xi);
    }
    Ok(x)
}

/// Row-by-row rule for a derivation `δ` of parity `delta_parity`:
/// `δ Ber A = Σ_{i even} Ber(A, row i → δ row i)
///            − (Ber A)² Σ_{i odd} Ber*(A, row i → δ row i)`.
pub fn differentiate_ber<S: Scalar>(
    a: &FormatMatrix<S>,
    delta: &dyn Fn(&S) -> S,
    delta_parity: Parity,
) -> Result<S> {
    let b = ber(a)?;
    let wrong_if = |i| delta_parity.is_odd().then_some(Line::Row(i));
    let mut even_sum = a.template();
    let mut odd_sum = a.template();
    for i in 0..a.nrows() {
        let drow: Vec<S> = a.row(i).iter().map(delta).collect();
        let replaced = a.replace_row(i, drow, wrong_if(i));
        if a.format.rows[i].is_even() {
            even_sum = even_sum.plus(&ber(&replaced)?);
        } else {
            odd_sum = odd_sum.plus(&ber_star(&replaced)?);
        }
    }
    Ok(even_sum.minus(&b.times(&b).times(&odd_sum)))
}

/// `str B = tr B₀₀ − tr B₁₁`.
pub fn supertrace<S: Scalar>(b: &FormatMatrix<S>) -> S {
    let mut acc = b.template();
    for i in 0..b.nrows().min(b.ncols()) {
        if b.format.rows[i] != b.format.cols[i] {
            continue;
        }
        acc = if b.format.rows[i].is_even() {
            acc.plus(b.get(i, i))
        } else {
            acc.minus(b.get(i, i))
        };
    }
    acc
}

/// `δ Ber A = Ber A · str(δA·A⁻¹)` for an even derivation `δ`.
pub fn differentiate_ber_supertrace<S: Scalar>(
    a: &FormatMatrix<S>,
    delta: &dyn Fn(&S) -> S,
) -> Result<S> {
    let b = ber(a)?;
    let da = a.map(delta);
    let prod = da.mul(&inverse_gauss(a)?)?;
    Ok(b.times(&supertrace(&prod)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{Grassmann, Series, SuperFunction, SymbolicScalar, Truncation};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const T: Truncation = Truncation(5);

    fn sym_matrix(format: MatrixFormat) -> FormatMatrix<SymbolicScalar> {
        let entries = (0..format.rows.len())
            .map(|i| {
                (0..format.cols.len())
                    .map(|j| {
                        let p = format.rows[i] + format.cols[j];
                        SymbolicScalar::constant(&format!("a{i}{j}"), p)
                    })
                    .collect()
            })
            .collect();
        FormatMatrix::new(entries, format).unwrap()
    }

    fn random_entry(rng: &mut ChaCha8Rng, p: Parity, diag: bool) -> SuperFunction {
        let g = |rng: &mut ChaCha8Rng| rng.gen_range(0..4usize);
        let int = |rng: &mut ChaCha8Rng| Grassmann::integer(rng.gen_range(-3..=3));
        let even = |rng: &mut ChaCha8Rng| {
            let a = g(rng);
            let b = (a + 1 + g(rng) % 3) % 4;
            int(rng).add(&Grassmann::generator(a).mul(&Grassmann::generator(b)).mul(&int(rng)))
        };
        let odd = |rng: &mut ChaCha8Rng| Grassmann::generator(g(rng)).mul(&int(rng));
        let (c0, c1, c2) = match p {
            Parity::Even => (even(rng), even(rng), odd(rng)),
            Parity::Odd => (odd(rng), odd(rng), even(rng)),
        };
        let c0 = if diag { c0.add(&Grassmann::integer(7)) } else { c0 };
        let prec = T.prec();
        SuperFunction::new(Series::from_coeffs(&[c0, c1], prec), Series::from_coeffs(&[c2], prec))
    }

    fn random_matrix(format: MatrixFormat, seed: u64) -> FormatMatrix<SuperFunction> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let entries = (0..format.rows.len())
            .map(|i| {
                (0..format.cols.len())
                    .map(|j| random_entry(&mut rng, format.rows[i] + format.cols[j], i == j))
                    .collect()
            })
            .collect();
        FormatMatrix::new(entries, format).unwrap()
    }

    fn formats() -> Vec<MatrixFormat> {
        vec![
            MatrixFormat::standard(1, 1),
            MatrixFormat::standard(2, 1),
            MatrixFormat::alternating(3),
            MatrixFormat::alternating(4),
            MatrixFormat::square(vec![Parity::Odd, Parity::Even, Parity::Odd]),
        ]
    }

    #[test]
    fn one_one_closed_form() {
        let a = sym_matrix(MatrixFormat::standard(1, 1));
        let (a00, a01, a10, a11) = (a.get(0, 0), a.get(0, 1), a.get(1, 0), a.get(1, 1));
        let inv11 = a11.try_inverse().unwrap();
        let expected = a00.minus(&a01.times(&inv11).times(a10)).times(&inv11);
        assert_eq!(ber(&a).unwrap(), expected);
        assert_eq!(ber_alt(&a).unwrap(), expected);
        assert_eq!(ber_star(&a).unwrap().to_string(), ber(&a.pi()).unwrap().to_string());
    }

    #[test]
    fn both_block_formulas_agree() {
        for (k, f) in formats().into_iter().enumerate() {
            let a = random_matrix(f, k as u64);
            assert_eq!(ber(&a).unwrap(), ber_alt(&a).unwrap());
        }
    }

    #[test]
    fn ber_is_multiplicative() {
        for (k, f) in formats().into_iter().enumerate() {
            let a = random_matrix(f.clone(), 10 + k as u64);
            let b = random_matrix(f, 20 + k as u64);
            let ab = a.mul(&b).unwrap();
            assert_eq!(ber(&ab).unwrap(), ber(&a).unwrap().times(&ber(&b).unwrap()));
        }
    }

    #[test]
    fn wrong_line_parity_is_enforced() {
        let a = sym_matrix(MatrixFormat::standard(1, 1));
        let odd_row = a.clone().with_wrong(Some(Line::Row(1)));
        assert!(matches!(ber(&odd_row), Err(Error::IllegalWrongness(_))));
        let even_row = a.with_wrong(Some(Line::Row(0)));
        assert!(matches!(ber_star(&even_row), Err(Error::IllegalWrongness(_))));
    }

    #[test]
    fn expansions_reproduce_ber_and_ber_star() {
        for (k, f) in formats().into_iter().enumerate() {
            let a = random_matrix(f, 30 + k as u64);
            let b = ber(&a).unwrap();
            let bs = ber_star(&a).unwrap();
            for i in 0..a.nrows() {
                let want = if a.format.rows[i].is_even() { &b } else { &bs };
                assert_eq!(&expand_row(&a, i).unwrap(), want, "row {i}");
                let want = if a.format.cols[i].is_even() { &b } else { &bs };
                assert_eq!(&expand_col(&a, i).unwrap(), want, "col {i}");
            }
        }
    }

    #[test]
    fn cofactor_formulas() {
        let a = sym_matrix(MatrixFormat::standard(1, 1));
        let a01 = a.get(0, 1);
        let a11 = a.get(1, 1);
        let inv = a11.times(a11).try_inverse().unwrap();
        assert_eq!(cofactor(&a, 1, 0).unwrap(), a01.times(&inv).negate());
        assert_eq!(cofactor_odd_even(&a, 1, 0).unwrap(), cofactor(&a, 1, 0).unwrap());
        for (k, f) in formats().into_iter().enumerate() {
            let a = random_matrix(f, 40 + k as u64);
            for i in 0..a.nrows() {
                for j in 0..a.ncols() {
                    let (pi, pj) = (a.format.rows[i], a.format.cols[j]);
                    if pi.is_even() && pj.is_even() {
                        assert_eq!(cofactor_minor(&a, i, j).unwrap(), cofactor(&a, i, j).unwrap());
                    }
                    if pi.is_odd() && pj.is_even() && a.format.rows == a.format.cols {
                        assert_eq!(
                            cofactor_odd_even(&a, i, j).unwrap(),
                            cofactor(&a, i, j).unwrap()
                        );
                    }
                }
            }
        }
        assert!(matches!(
            cofactor(&a, 1, 1),
            Err(Error::CofactorUndefined(_))
        ));
    }

    #[test]
    fn inverse_from_cofactors() {
        for (k, f) in formats().into_iter().enumerate() {
            let a = random_matrix(f, 50 + k as u64);
            let inv = inverse_cofactor(&a).unwrap();
            assert_eq!(inv, inverse_gauss(&a).unwrap());
            let id = FormatMatrix::identity(a.format.clone(), &a.template());
            assert_eq!(a.mul(&inv).unwrap(), id);
        }
    }

    #[test]
    fn cramer_systems() {
        for (k, f) in formats().into_iter().enumerate() {
            let a = random_matrix(f.clone(), 60 + k as u64);
            for bp in [Parity::Even, Parity::Odd] {
                let mut rng = ChaCha8Rng::seed_from_u64(70 + k as u64);
                let b: Vec<_> = f.cols.iter().map(|c| random_entry(&mut rng, *c + bp, false)).collect();
                let x = solve_row_cramer(&a, &b).unwrap();
                for j in 0..a.ncols() {
                    let s = (0..a.nrows())
                        .fold(a.template(), |acc, i| acc.plus(&x[i].times(a.get(i, j))));
                    assert_eq!(s, b[j]);
                }
                let b: Vec<_> = f.rows.iter().map(|r| random_entry(&mut rng, *r + bp, false)).collect();
                let x = solve_cramer(&a, &b).unwrap();
                for i in 0..a.nrows() {
                    let s = (0..a.ncols())
                        .fold(a.template(), |acc, j| acc.plus(&a.get(i, j).times(&x[j])));
                    assert_eq!(s, b[i]);
                }
            }
        }
    }

    #[test]
    fn derivations_of_ber() {
        for (k, f) in formats().into_iter().enumerate() {
            let a = random_matrix(f, 80 + k as u64);
            let b = ber(&a).unwrap();
            let d = |s: &SuperFunction| s.superderivative();
            assert_eq!(differentiate_ber(&a, &d, Parity::Odd).unwrap(), b.superderivative());
            let dx = |s: &SuperFunction| s.dx();
            assert_eq!(differentiate_ber(&a, &dx, Parity::Even).unwrap(), b.dx());
            assert_eq!(differentiate_ber_supertrace(&a, &dx).unwrap(), b.dx());
        }
    }
}
