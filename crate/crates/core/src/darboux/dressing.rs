//! Symbolic dressing formulas: the coefficients `b_k` of `L₁` in terms of
//! those of `L₀` and `M`, read off `ML₀ = L₁M` from the top down.

use std::fmt;

use num_bigint::BigInt;

use crate::scalars::{q, Parity, Scalar, SymbolicScalar, Q};
use crate::superop::SuperDiffOp;

/// Order of the intertwining operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DressingOrder {
    Concrete(usize),
    /// `r = 2s + 1` with `s` an even constant symbol.
    Odd,
    /// `r = 2s`.
    Even,
}

impl fmt::Display for DressingOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DressingOrder::Concrete(r) => write!(f, "r = {r}"),
            DressingOrder::Odd => f.write_str("r odd (r = 2s+1)"),
            DressingOrder::Even => f.write_str("r even (r = 2s)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DressingResult {
    pub n: usize,
    pub r: DressingOrder,
    /// `b₁, …, b_n`.
    pub b: Vec<SymbolicScalar>,
    /// Coefficients of `D^{r−1}, …, D⁰` in `ML₀ − L₁M`; empty for a
    /// generic order, where only the top part is computed.
    pub compatibility: Vec<SymbolicScalar>,
}

impl DressingResult {
    /// Substitutes `value` for a symbol in every formula.
    pub fn substitute(&self, name: &str, value: &SymbolicScalar) -> DressingResult {
        DressingResult {
            n: self.n,
            r: self.r,
            b: self.b.iter().map(|e| e.substitute(name, value)).collect(),
            compatibility: self
                .compatibility
                .iter()
                .map(|e| e.substitute(name, value))
                .collect(),
        }
    }

    /// One `name_k = …` line per coefficient, under a header.
    pub fn render(&self, names: &[String]) -> String {
        let mut out = format!("n = {}, {}\n", self.n, self.r);
        for (k, b) in self.b.iter().enumerate() {
            let name = names.get(k).cloned().unwrap_or_else(|| format!("b{}", k + 1));
            out.push_str(&format!("{name} = {b}\n"));
        }
        for (j, c) in self.compatibility.iter().enumerate() {
            out.push_str(&format!("compat D^{} : {c} = 0\n", self.compatibility.len() - 1 - j));
        }
        out
    }
}

impl fmt::Display for DressingResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&[]))
    }
}

/// `Dᵐ + x₁Dᵐ⁻¹ + … + x_m` with symbols `x_k` of parity `k mod 2`.
pub fn generic_operator(prefix: &str, m: usize) -> SuperDiffOp<SymbolicScalar> {
    let lower = (1..=m)
        .map(|k| SymbolicScalar::symbol(&format!("{prefix}{k}"), Parity::from(k)))
        .collect();
    SuperDiffOp::monic(&SymbolicScalar::one(), lower)
}

/// Dressing for a concrete order `r` by full expansion of both sides.
pub fn derive_dressing(n: usize, r: usize) -> DressingResult {
    let l0 = generic_operator("a", n);
    let m = generic_operator("c", r);
    let lhs = m.compose(&l0);
    let zero = SymbolicScalar::zero();
    let mut b = vec![zero.clone(); n];
    for k in 1..=n {
        let l1 = SuperDiffOp::monic(&zero, b.clone());
        let diff = lhs.sub(&l1.compose(&m));
        b[k - 1] = diff.power_coeff(n + r - k);
    }
    let l1 = SuperDiffOp::monic(&zero, b.clone());
    let residual = lhs.sub(&l1.compose(&m));
    debug_assert!((r..=n + r).all(|p| residual.power_coeff(p).is_zero()));
    let compatibility = (0..r).rev().map(|p| residual.power_coeff(p)).collect();
    DressingResult {
        n,
        r: DressingOrder::Concrete(r),
        b,
        compatibility,
    }
}

fn s_symbol() -> SymbolicScalar {
    SymbolicScalar::constant("s", Parity::Even)
}

/// `C(h, t)` as a polynomial in `h`.
fn binomial_poly(h: &SymbolicScalar, t: usize) -> SymbolicScalar {
    let mut acc = SymbolicScalar::one();
    let mut fact = BigInt::from(1);
    for u in 0..t {
        acc = acc.times(&h.minus(&SymbolicScalar::integer(u as i64)));
        fact *= u + 1;
    }
    acc.scale(&Q::new(1.into(), fact))
}

/// `⟨r − i, p⟩` and the parity of `r − i − p`, for `r = 2s + ε`.
fn generic_superbinomial(eps: usize, i: usize, p: usize) -> (SymbolicScalar, Parity) {
    let e = eps as i64 - i as i64;
    let bit = e.rem_euclid(2) as usize;
    let h = s_symbol().plus(&SymbolicScalar::integer(e.div_euclid(2)));
    let value = if bit == 0 && p % 2 == 1 {
        SymbolicScalar::zero()
    } else {
        binomial_poly(&h, p / 2)
    };
    (value, Parity::from(bit + p))
}

fn concrete_superbinomial(k: usize, p: usize) -> SymbolicScalar {
    SymbolicScalar::rational(Q::from_integer(crate::superop::superbinomial(k as u64, p as u64)))
}

fn signed(x: SymbolicScalar, negative: bool) -> SymbolicScalar {
    if negative {
        x.negate()
    } else {
        x
    }
}

/// Dressing for a generic order `r` of the given parity. Only the top
/// `n + 1` coefficients of both sides are formed, with the superbinomials
/// `⟨r − i, p⟩` written as polynomials in `s`; the formulas specialize to
/// [`derive_dressing`] once `c_j = 0` for `j > r`.
pub fn derive_dressing_generic(n: usize, parity: Parity) -> DressingResult {
    let eps = parity.bit();
    let a = |k: usize| -> SymbolicScalar {
        if k == 0 {
            SymbolicScalar::one()
        } else {
            SymbolicScalar::symbol(&format!("a{k}"), Parity::from(k))
        }
    };
    let c = |i: usize| -> SymbolicScalar {
        if i == 0 {
            SymbolicScalar::one()
        } else {
            SymbolicScalar::symbol(&format!("c{i}"), Parity::from(i))
        }
    };
    // lhs[K]: coefficient of D^{n+r−K} in M∘L₀
    let mut lhs = vec![SymbolicScalar::zero(); n + 1];
    for i in 0..=n {
        for k in 0..=n - i {
            let ak = a(k);
            let ak_parity = Parity::from(k);
            for p in 0..=n - i - k {
                let (sb, rest) = generic_superbinomial(eps, i, p);
                if sb.is_zero() {
                    continue;
                }
                let term = c(i).times(&sb).times(&ak.superderivative_n(p));
                lhs[i + k + p] = lhs[i + k + p].plus(&signed(term, rest.sign_with(ak_parity)));
            }
        }
    }
    let rhs_top = |b: &[SymbolicScalar]| -> Vec<SymbolicScalar> {
        let mut out = vec![SymbolicScalar::zero(); n + 1];
        for k in 0..=n {
            let bk = if k == 0 { SymbolicScalar::one() } else { b[k - 1].clone() };
            if bk.is_zero() {
                continue;
            }
            for i in 0..=n - k {
                let ci = c(i);
                for p in 0..=n - k - i {
                    let sb = concrete_superbinomial(n - k, p);
                    if sb.is_zero() {
                        continue;
                    }
                    let rest = Parity::from(n - k - p);
                    let term = bk.times(&sb).times(&ci.superderivative_n(p));
                    out[k + i + p] =
                        out[k + i + p].plus(&signed(term, rest.sign_with(Parity::from(i))));
                }
            }
        }
        out
    };
    let mut b = vec![SymbolicScalar::zero(); n];
    for k in 1..=n {
        let rhs = rhs_top(&b);
        b[k - 1] = lhs[k].minus(&rhs[k]);
    }
    DressingResult {
        n,
        r: if parity.is_odd() { DressingOrder::Odd } else { DressingOrder::Even },
        b,
        compatibility: Vec::new(),
    }
}

/// First two elementary dressing coefficients against the closed forms:
/// for odd `n`, `b₁ = −a₁ + 2μ` and `b₂ = a₂ + Da₁ − Dμ`; for even `n`,
/// `b₁ = −a₁` and `b₂ = a₂ + Da₁ + 2μa₁`.
#[derive(Clone, Debug, PartialEq)]
pub struct PatternReport {
    pub n: usize,
    pub b1: SymbolicScalar,
    pub b2: SymbolicScalar,
    pub expected_b1: SymbolicScalar,
    pub expected_b2: SymbolicScalar,
}

impl PatternReport {
    pub fn holds(&self) -> bool {
        self.b1 == self.expected_b1 && self.b2 == self.expected_b2
    }
}

pub fn mu_symbol() -> SymbolicScalar {
    SymbolicScalar::symbol("mu", Parity::Odd)
}

/// Elementary (`r = 1`) dressing with `c₁` renamed `μ`.
pub fn elementary_dressing(n: usize) -> DressingResult {
    derive_dressing(n, 1).substitute("c1", &mu_symbol())
}

pub fn dressing_patterns(n: usize) -> PatternReport {
    assert!(n >= 2, "patterns concern b1 and b2");
    let d = elementary_dressing(n);
    let a1 = SymbolicScalar::symbol("a1", Parity::Odd);
    let a2 = SymbolicScalar::symbol("a2", Parity::Even);
    let mu = mu_symbol();
    let two = q(2);
    let (expected_b1, expected_b2) = if n % 2 == 1 {
        (
            a1.negate().plus(&mu.scale(&two)),
            a2.plus(&a1.superderivative()).minus(&mu.superderivative()),
        )
    } else {
        (
            a1.negate(),
            a2.plus(&a1.superderivative()).plus(&mu.times(&a1).scale(&two)),
        )
    };
    PatternReport {
        n,
        b1: d.b[0].clone(),
        b2: d.b[1].clone(),
        expected_b1,
        expected_b2,
    }
}
