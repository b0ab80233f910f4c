//! Berezinian laws on random even matrices of size up to 3|3.

#![allow(clippy::needless_range_loop)]

mod common;

use common::Gen;
use proptest::prelude::*;
use superline::supermatrix::{
    ber, ber_alt, ber_star, cofactor, cofactor_minor, cofactor_odd_even, cofactor_star,
    differentiate_ber, differentiate_ber_supertrace, expand_col, expand_row, inverse_cofactor,
    inverse_gauss, FormatMatrix, Line, MatrixFormat,
};
use superline::{Error, Parity, Scalar, SuperFunction, SymbolicScalar, Truncation};

const T: Truncation = Truncation(5);

fn setup(seed: u64, p: usize, q: usize) -> (Gen, FormatMatrix<SuperFunction>) {
    let mut g = Gen::new(seed, 4, 1, T);
    let f = g.format(p, q);
    let a = g.matrix(&f);
    (g, a)
}

fn sizes() -> impl Strategy<Value = (usize, usize)> {
    (0usize..=3, 0usize..=3).prop_filter("non-empty", |(p, q)| p + q > 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn scaling_a_row(seed: u64, (p, q) in sizes(), row in 0usize..6) {
        let (mut g, a) = setup(seed, p, q);
        let i = row % a.nrows();
        let lambda = g.unit();
        let scaled = ber(&a.scale_row(i, &lambda)).unwrap();
        let b = ber(&a).unwrap();
        let expected = if a.format().rows[i].is_even() {
            lambda.times(&b)
        } else {
            lambda.try_inverse().unwrap().times(&b)
        };
        prop_assert_eq!(scaled, expected);
    }

    #[test]
    fn elementary_row_operations(seed: u64, (p, q) in sizes(), s in 0usize..6, t in 0usize..6) {
        let (mut g, a) = setup(seed, p, q);
        let n = a.nrows();
        prop_assume!(n > 1 && s % n != t % n);
        let (src, dst) = (s % n, t % n);
        let lambda = g.function(a.format().rows[src] + a.format().rows[dst]);
        let b = a.add_row_multiple(dst, src, &lambda).unwrap();
        prop_assert_eq!(ber(&b).unwrap(), ber(&a).unwrap());
    }

    #[test]
    fn linear_in_even_rows_and_ber_star_in_odd_rows(seed: u64, (p, q) in sizes(), row in 0usize..6) {
        let (mut g, a) = setup(seed, p, q);
        let i = row % a.nrows();
        let pi = a.format().rows[i];
        let u: Vec<_> = a.format().cols.iter().map(|c| g.function(pi + *c)).collect();
        let sum: Vec<_> = a.row(i).iter().zip(&u).map(|(x, y)| x.plus(y)).collect();
        let with = |r: Vec<SuperFunction>| a.replace_row(i, r, None);
        let f = |m: &FormatMatrix<SuperFunction>| if pi.is_even() { ber(m) } else { ber_star(m) };
        let lhs = f(&with(sum));
        let rhs = f(&a).unwrap().plus(&f(&with(u)).unwrap());
        prop_assert_eq!(lhs.unwrap(), rhs);
    }

    #[test]
    fn multiplicative_and_inverted_by_parity_reversal(seed: u64, (p, q) in sizes()) {
        let (mut g, a) = setup(seed, p, q);
        let b = g.matrix(a.format());
        let ab = a.mul(&b).unwrap();
        let ba = ber(&a).unwrap();
        prop_assert_eq!(ber(&ab).unwrap(), ba.times(&ber(&b).unwrap()));
        prop_assert_eq!(ber(&a.pi()).unwrap(), ba.try_inverse().unwrap());
        prop_assert_eq!(ber_star(&a).unwrap().times(&ba), SuperFunction::one(T));
        prop_assert_eq!(ber_alt(&a).unwrap(), ba);
        let id = FormatMatrix::identity(a.format().clone(), &a.template());
        prop_assert_eq!(ber(&id).unwrap(), SuperFunction::one(T));
    }

    #[test]
    fn expansions_and_cofactors(seed: u64, (p, q) in sizes()) {
        let (_, a) = setup(seed, p, q);
        let b = ber(&a).unwrap();
        let bs = ber_star(&a).unwrap();
        let inv = inverse_gauss(&a).unwrap();
        prop_assert_eq!(&inverse_cofactor(&a).unwrap(), &inv);
        let (rows, cols) = (&a.format().rows, &a.format().cols);
        for i in 0..a.nrows() {
            prop_assert_eq!(&expand_row(&a, i).unwrap(), if rows[i].is_even() { &b } else { &bs });
            prop_assert_eq!(&expand_col(&a, i).unwrap(), if cols[i].is_even() { &b } else { &bs });
            for j in 0..a.ncols() {
                let (pi, pj) = (rows[i], cols[j]);
                if pi.is_even() || pj.is_even() {
                    let adj = cofactor(&a, i, j).unwrap();
                    prop_assert_eq!(adj.times(&b.try_inverse().unwrap()), inv.get(j, i).clone());
                }
                if pi.is_odd() || pj.is_odd() {
                    let adj = cofactor_star(&a, i, j).unwrap();
                    prop_assert_eq!(adj.times(&bs.try_inverse().unwrap()), inv.get(j, i).clone());
                }
                if pi.is_even() && pj.is_even() {
                    prop_assert_eq!(cofactor_minor(&a, i, j).unwrap(), cofactor(&a, i, j).unwrap());
                }
                if pi.is_odd() && pj.is_even() {
                    prop_assert_eq!(cofactor_odd_even(&a, i, j).unwrap(), cofactor(&a, i, j).unwrap());
                }
            }
        }
    }

    #[test]
    fn derivatives_of_ber(seed: u64, (p, q) in sizes()) {
        let (_, a) = setup(seed, p, q);
        let b = ber(&a).unwrap();
        let d = |s: &SuperFunction| s.superderivative();
        let dx = |s: &SuperFunction| s.dx();
        prop_assert_eq!(differentiate_ber(&a, &d, Parity::Odd).unwrap(), b.superderivative());
        prop_assert_eq!(differentiate_ber(&a, &dx, Parity::Even).unwrap(), b.dx());
        prop_assert_eq!(differentiate_ber_supertrace(&a, &dx).unwrap(), b.dx());
    }
}

/// `((t, y), (t, y))` with the odd vector `(t, y)` in the even row.
fn warning_matrix() -> FormatMatrix<SymbolicScalar> {
    let t = SymbolicScalar::constant("t", Parity::Odd);
    let y = SymbolicScalar::constant("y", Parity::Even);
    FormatMatrix::new(
        vec![vec![t.clone(), y.clone()], vec![t, y]],
        MatrixFormat::standard(1, 1),
    )
    .unwrap()
    .with_wrong(Some(Line::Row(0)))
}

#[test]
fn wrong_line_absorbs_correct_lines_only() {
    let a = warning_matrix();
    assert!(ber(&a).unwrap().is_zero());
    let minus_one = SymbolicScalar::integer(-1);
    // subtracting the correct row from the wrong one is allowed
    let reduced = a.add_row_multiple(0, 1, &minus_one).unwrap();
    assert!(ber(&reduced).unwrap().is_zero());
    // the other direction is refused
    assert!(matches!(
        a.add_row_multiple(1, 0, &minus_one),
        Err(Error::IllegalWrongness(_))
    ));
    // and done by hand it destroys the invertible block
    let zero = SymbolicScalar::zero();
    let forced = a.replace_row(1, vec![zero.clone(), zero], Some(Line::Row(0)));
    assert!(matches!(ber(&forced), Err(Error::BerUndefined(_))));
}
