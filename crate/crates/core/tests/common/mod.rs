//! Seeded random data shared by the integration tests.

#![allow(dead_code)]

pub mod fixtures;
pub mod golden;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use superline::scalars::{Grassmann, Series};
use superline::supermatrix::{FormatMatrix, MatrixFormat};
use superline::superop::SuperDiffOp;
use superline::{Parity, Scalar, SuperFunction, SymbolicScalar, Truncation};

/// Random concrete data over `generators` odd constants, with polynomial
/// coefficients of degree at most `degree`.
pub struct Gen {
    pub rng: ChaCha8Rng,
    pub generators: usize,
    pub degree: usize,
    pub t: Truncation,
}

impl Gen {
    pub fn new(seed: u64, generators: usize, degree: usize, t: Truncation) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            generators,
            degree,
            t,
        }
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    pub fn parity(&mut self) -> Parity {
        if self.coin() {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    fn generator(&mut self) -> Grassmann {
        Grassmann::generator(self.rng.gen_range(0..self.generators))
    }

    /// Homogeneous constant: an integer plus a quadratic term when even,
    /// a combination of generators (and maybe a cubic term) when odd.
    pub fn constant(&mut self, p: Parity) -> Grassmann {
        if self.generators == 0 {
            return match p {
                Parity::Even => Grassmann::integer(self.int(-3, 3)),
                Parity::Odd => Grassmann::zero(),
            };
        }
        let mut g = match p {
            Parity::Even => Grassmann::integer(self.int(-3, 3)),
            Parity::Odd => self.generator().scale(&superline::scalars::q(self.int(-3, 3))),
        };
        if self.generators >= 2 && self.coin() {
            let a = self.generator();
            let b = self.generator();
            let c = Grassmann::integer(self.int(-2, 2));
            let quad = a.mul(&b).mul(&c);
            g = match p {
                Parity::Even => g.add(&quad),
                Parity::Odd => {
                    let d = self.generator();
                    g.add(&quad.mul(&d)).add(&self.generator())
                }
            };
        }
        g
    }

    /// `f⁰ + ξf¹` with polynomial components of the right parities.
    pub fn function(&mut self, p: Parity) -> SuperFunction {
        let prec = self.t.prec();
        let d = self.degree;
        let c0: Vec<Grassmann> = (0..=d).map(|_| self.constant(p)).collect();
        let c1: Vec<Grassmann> = (0..=d).map(|_| self.constant(p.flip())).collect();
        SuperFunction::new(Series::from_coeffs(&c0, prec), Series::from_coeffs(&c1, prec))
    }

    /// An even function with non-zero body at the origin.
    pub fn unit(&mut self) -> SuperFunction {
        let f = self.function(Parity::Even);
        let body = f.value_at_origin().unwrap().body();
        let shift = self.int(1, 3) * if self.coin() { 1 } else { -1 };
        let shift = if body == superline::scalars::q(-shift) { shift * 2 } else { shift };
        f.plus(&SuperFunction::integer(shift, self.t))
    }

    pub fn constant_function(&mut self, p: Parity) -> SuperFunction {
        SuperFunction::constant(&self.constant(p), self.t)
    }

    /// Order-`m` operator with polynomial coefficients, `a_k` of parity
    /// `k mod 2`; monic when asked, otherwise with an invertible top
    /// coefficient.
    pub fn operator(&mut self, m: usize, monic: bool) -> SuperDiffOp<SuperFunction> {
        let top = if monic {
            SuperFunction::one(self.t)
        } else {
            self.unit()
        };
        let mut coeffs = vec![top];
        for k in 1..=m {
            coeffs.push(self.function(Parity::from(k)));
        }
        SuperDiffOp::new(coeffs)
    }

    pub fn monic(&mut self, m: usize) -> SuperDiffOp<SuperFunction> {
        self.operator(m, true)
    }

    /// Any operator of order `m` and random parity (top coefficient
    /// homogeneous, possibly not invertible).
    pub fn any_operator(&mut self, m: usize) -> SuperDiffOp<SuperFunction> {
        let p = self.parity();
        let coeffs = (0..=m)
            .map(|k| self.function(p + Parity::from(m + k)))
            .collect();
        SuperDiffOp::new(coeffs)
    }

    /// Even invertible matrix of the given square format: even entries on
    /// the diagonal get a large body.
    pub fn matrix(&mut self, format: &MatrixFormat) -> FormatMatrix<SuperFunction> {
        let n = format.rows.len();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let f = self.function(format.rows[i] + format.cols[j]);
                        if i == j {
                            f.plus(&SuperFunction::integer(10, self.t))
                        } else {
                            f
                        }
                    })
                    .collect()
            })
            .collect();
        FormatMatrix::new(entries, format.clone()).unwrap()
    }

    /// Square format of size `p|q` in a random row order.
    pub fn format(&mut self, p: usize, q: usize) -> MatrixFormat {
        use rand::seq::SliceRandom;
        let mut labels = vec![Parity::Even; p];
        labels.extend(vec![Parity::Odd; q]);
        labels.shuffle(&mut self.rng);
        MatrixFormat::square(labels)
    }

    /// Upper triangular constant change of a flag basis: `ψ_j = Σ_{i≤j} φ_i g_ij`
    /// with `g_ij` of parity `p_i + p_j` and invertible diagonal.
    pub fn flag_change(&mut self, flag: &[SuperFunction]) -> Vec<SuperFunction> {
        let parities: Vec<Parity> = (0..flag.len()).map(Parity::from).collect();
        (0..flag.len())
            .map(|j| {
                let mut acc = flag[0].zero_like();
                for i in 0..=j {
                    let mut g = self.constant(parities[i] + parities[j]);
                    if i == j && g.body() == superline::scalars::q(0) {
                        g = g.add(&Grassmann::one());
                    }
                    let g = SuperFunction::constant(&g, self.t);
                    acc = acc.plus(&flag[i].times(&g));
                }
                acc
            })
            .collect()
    }
}

/// Random polynomials in the jets of `f, g` (even) and `psi, chi` (odd).
pub struct SymGen {
    pub rng: ChaCha8Rng,
}

impl SymGen {
    pub fn new(seed: u64) -> Self {
        SymGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// A jet `Dᵏs` of parity `p` with `k ≤ 2`.
    pub fn jet(&mut self, p: Parity) -> SymbolicScalar {
        let (name, base) = *[
            ("f", Parity::Even),
            ("g", Parity::Even),
            ("psi", Parity::Odd),
            ("chi", Parity::Odd),
        ]
        .get(self.rng.gen_range(0..4))
        .unwrap();
        let k = if (base + p).is_odd() { 1 } else { 2 * self.rng.gen_range(0..2) };
        SymbolicScalar::symbol(name, base).superderivative_n(k)
    }

    pub fn scalar(&mut self, p: Parity) -> SymbolicScalar {
        let terms = self.rng.gen_range(1..=3);
        let mut acc = if p.is_even() {
            SymbolicScalar::integer(self.rng.gen_range(-2..=2))
        } else {
            SymbolicScalar::zero()
        };
        for _ in 0..terms {
            let mut t = self.jet(p).scale(&superline::scalars::q(self.rng.gen_range(-3..=3)));
            if self.rng.gen_bool(0.5) {
                let q = if self.rng.gen_bool(0.5) { Parity::Odd } else { Parity::Even };
                t = t.times(&self.jet(q)).times(&self.jet(q));
            }
            acc = acc.plus(&t);
        }
        acc
    }

    /// One even monomial body plus nilpotent terms.
    pub fn unit(&mut self) -> SymbolicScalar {
        let c = superline::scalars::q(self.rng.gen_range(1..=3));
        let mut body = self.jet(Parity::Even);
        while !body.is_unit() {
            body = self.jet(Parity::Even);
        }
        if self.rng.gen_bool(0.5) {
            body = body.try_inverse().unwrap();
        }
        let nil = self.jet(Parity::Odd).times(&self.jet(Parity::Odd));
        body.scale(&c).plus(&nil)
    }

    pub fn operator(&mut self, m: usize, p: Parity) -> SuperDiffOp<SymbolicScalar> {
        let coeffs = (0..=m)
            .map(|k| {
                if k == 0 && Parity::from(m) == p {
                    SymbolicScalar::one()
                } else {
                    self.scalar(p + Parity::from(m + k))
                }
            })
            .collect();
        SuperDiffOp::new(coeffs)
    }
}
