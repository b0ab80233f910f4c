//! Shared helpers for canonical text output.

use num_traits::{One, Signed, Zero};

use crate::scalars::Q;

/// Joins `coefficient * factor * …` terms into `a - 2*b + 1/3*c`.
///
/// Unit coefficients are dropped unless the term has no factors; an empty
/// sum prints as `0`.
pub fn join_terms<I>(terms: I) -> String
where
    I: IntoIterator<Item = (Q, Vec<String>)>,
{
    let mut out = String::new();
    for (c, factors) in terms {
        if c.is_zero() {
            continue;
        }
        let negative = c.is_negative();
        let abs = c.abs();
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        out.push_str(&term_body(&abs, &factors));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn term_body(abs: &Q, factors: &[String]) -> String {
    if factors.is_empty() {
        return rational(abs);
    }
    let mut parts = Vec::with_capacity(factors.len() + 1);
    if !abs.is_one() {
        parts.push(rational(abs));
    }
    parts.extend(factors.iter().cloned());
    parts.join("*")
}

/// `p` or `p/q`.
pub fn rational(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{frac, q};

    #[test]
    fn signs_and_units() {
        let t = vec![
            (q(-1), vec!["a1".to_string()]),
            (q(2), vec!["D(a2)".into(), "c1".into()]),
            (frac(-1, 3), vec![]),
        ];
        assert_eq!(join_terms(t), "-a1 + 2*D(a2)*c1 - 1/3");
        assert_eq!(join_terms(Vec::new()), "0");
    }
}
