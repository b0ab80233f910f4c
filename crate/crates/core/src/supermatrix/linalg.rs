//! Plain matrices over a scalar model: products, determinants and inverses.
//!
//! Entries of the matrices handled here are even, except possibly along one
//! row or one column (the image of a wrong line). Such matrices have
//! well-defined determinants because every product in the permutation
//! expansion contains at most one odd factor.

use crate::error::{Error, Result};
use crate::scalars::{Parity, Scalar};

pub type Mat<S> = Vec<Vec<S>>;

pub fn mat_mul<S: Scalar>(a: &Mat<S>, b: &Mat<S>, template: &S) -> Mat<S> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(template.zero_like(), |acc, k| {
                        if row[k].is_zero() || b[k][j].is_zero() {
                            acc
                        } else {
                            acc.plus(&row[k].times(&b[k][j]))
                        }
                    })
                })
                .collect()
        })
        .collect()
}

pub fn mat_sub<S: Scalar>(a: &Mat<S>, b: &Mat<S>) -> Mat<S> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x.minus(y)).collect())
        .collect()
}

fn line_is_even<'a, S: Scalar + 'a>(mut entries: impl Iterator<Item = &'a S>) -> bool {
    entries.all(|e| e.has_parity(Parity::Even))
}

/// Determinant by Bareiss elimination with invertible pivots taken from
/// even lines, falling back to Laplace expansion on the trailing block when
/// no such pivot exists.
pub fn det<S: Scalar>(m: &Mat<S>, template: &S) -> S {
    let n = m.len();
    if n == 0 {
        return template.one_like();
    }
    let mut a = m.clone();
    let mut negate = false;
    let mut prev = template.one_like();
    for k in 0..n {
        let pivot = (k..n).find_map(|r| {
            if !line_is_even(a[r][k..].iter()) {
                return None;
            }
            (k..n).find(|&c| a[r][c].is_unit() && line_is_even((k..n).map(|i| &a[i][c])))
                .map(|c| (r, c))
        });
        let Some((r, c)) = pivot else {
            let trailing: Mat<S> = a[k..].iter().map(|row| row[k..].to_vec()).collect();
            let mut value = laplace(&trailing, template);
            let prev_inv = prev.try_inverse().expect("Bareiss pivots are invertible");
            for _ in 1..(n - k) {
                value = value.times(&prev_inv);
            }
            return if negate { value.negate() } else { value };
        };
        if r != k {
            a.swap(r, k);
            negate = !negate;
        }
        if c != k {
            for row in a.iter_mut() {
                row.swap(c, k);
            }
            negate = !negate;
        }
        let prev_inv = prev.try_inverse().expect("Bareiss pivots are invertible");
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[k][k]
                    .times(&a[i][j])
                    .minus(&a[i][k].times(&a[k][j]))
                    .times(&prev_inv);
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let value = a[n - 1][n - 1].clone();
    if negate {
        value.negate()
    } else {
        value
    }
}

/// Cofactor expansion along the first row that is not purely even (or the
/// first row), so the odd factor of each product comes first.
pub fn laplace<S: Scalar>(m: &Mat<S>, template: &S) -> S {
    let n = m.len();
    match n {
        0 => return template.one_like(),
        1 => return m[0][0].clone(),
        _ => {}
    }
    let r = (0..n).find(|&i| !line_is_even(m[i].iter())).unwrap_or(0);
    let mut acc = template.zero_like();
    for j in 0..n {
        if m[r][j].is_zero() {
            continue;
        }
        let minor: Mat<S> = (0..n)
            .filter(|&i| i != r)
            .map(|i| (0..n).filter(|&c| c != j).map(|c| m[i][c].clone()).collect())
            .collect();
        let term = m[r][j].times(&laplace(&minor, template));
        acc = if (r + j) % 2 == 1 { acc.minus(&term) } else { acc.plus(&term) };
    }
    acc
}

/// Inverse by Gauss–Jordan elimination with left multiplications, valid over
/// any associative ring once a unit pivot is found in every column.
pub fn inverse<S: Scalar>(m: &Mat<S>, template: &S) -> Result<Mat<S>> {
    let n = m.len();
    let mut a = m.clone();
    let mut inv: Mat<S> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { template.one_like() } else { template.zero_like() })
                .collect()
        })
        .collect();
    for k in 0..n {
        let r = (k..n).find(|&r| a[r][k].is_unit()).ok_or_else(|| {
            Error::SingularMatrix(format!("no invertible pivot in column {k}"))
        })?;
        a.swap(r, k);
        inv.swap(r, k);
        let p = a[k][k].try_inverse()?;
        a[k] = a[k].iter().map(|e| p.times(e)).collect();
        inv[k] = inv[k].iter().map(|e| p.times(e)).collect();
        for i in 0..n {
            if i == k || a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].clone();
            for j in 0..n {
                let (ak, ik) = (a[k][j].clone(), inv[k][j].clone());
                a[i][j] = a[i][j].minus(&f.times(&ak));
                inv[i][j] = inv[i][j].minus(&f.times(&ik));
            }
        }
    }
    Ok(inv)
}
