//! Session configuration and evaluation of parsed input in a scalar model.

use std::collections::BTreeMap;

use num_traits::One;
use serde_json::{json, Value};

use super::parse::{literal, parse_error, Declaration, Document, Expr, ExprKind, ModelName, Pos};
use crate::error::{Error, Result};
use crate::print::rational;
use crate::scalars::grassmann::MAX_GENERATORS;
use crate::scalars::series::series_terms;
use crate::scalars::{Parity, Scalar, SuperFunction, SymbolicScalar, Truncation, Q};
use crate::superop::SuperDiffOp;
use crate::supermatrix::FormatMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Structured,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symbol {
    pub parity: Parity,
    pub constant: bool,
}

/// Settings fixed for the lifetime of one command.
#[derive(Clone, Debug)]
pub struct SessionConfig {
    pub model: ModelName,
    pub truncation: Truncation,
    /// Odd constants of the concrete model, in generator order.
    pub generators: Vec<String>,
    pub symbols: BTreeMap<String, Symbol>,
    pub output: OutputFormat,
}

impl SessionConfig {
    /// Builds the configuration from a document. A truncation given on the
    /// command line (or in the environment) is used unless the document
    /// sets its own; the model is inferred from the declarations unless
    /// forced.
    pub fn from_document(
        doc: &Document,
        forced_model: Option<ModelName>,
        truncation: Truncation,
        output: OutputFormat,
    ) -> Result<Self> {
        let mut symbols: BTreeMap<String, Symbol> = BTreeMap::new();
        let mut generators = Vec::new();
        for Declaration {
            names,
            parity,
            constant,
            pos,
        } in &doc.declarations
        {
            for n in names {
                let new = Symbol {
                    parity: *parity,
                    constant: *constant,
                };
                match symbols.get(n) {
                    Some(old) if *old != new => {
                        return Err(Error::ParityConflict(format!(
                            "`{n}` redeclared at {}:{}",
                            pos.line, pos.column
                        )));
                    }
                    Some(_) => {}
                    None => {
                        if *constant && parity.is_odd() {
                            generators.push(n.clone());
                        }
                        symbols.insert(n.clone(), new);
                    }
                }
            }
        }
        let has_jets = symbols.values().any(|s| !s.constant);
        let has_even_constants = symbols.values().any(|s| s.constant && s.parity.is_even());
        let model = forced_model
            .or(doc.model.map(|m| m.0))
            .unwrap_or(if has_jets || has_even_constants {
                ModelName::Symbolic
            } else {
                ModelName::Concrete
            });
        if model == ModelName::Concrete {
            if let Some((name, _)) = symbols
                .iter()
                .find(|(_, s)| !s.constant || s.parity.is_even())
            {
                return Err(Error::ModelMismatch(format!(
                    "the concrete model has no symbol `{name}`; only odd constants can be declared"
                )));
            }
            if generators.len() > MAX_GENERATORS {
                return Err(Error::ModelMismatch(format!(
                    "at most {MAX_GENERATORS} odd constants"
                )));
            }
        }
        Ok(SessionConfig {
            model,
            truncation: doc.trunc.map(Truncation).unwrap_or(truncation),
            generators,
            symbols,
            output,
        })
    }
}

/// A scalar model the command layer can build and print.
pub trait Model: Scalar {
    fn from_rational(q: &Q, cfg: &SessionConfig) -> Self;
    fn symbol(name: &str, pos: Pos, cfg: &SessionConfig) -> Result<Self>;
    fn render(&self, cfg: &SessionConfig) -> String;
    /// `(coefficient, factors)` terms in canonical order.
    fn terms(&self, cfg: &SessionConfig) -> Vec<(Q, Vec<String>)>;
}

fn undeclared(name: &str, pos: Pos) -> Error {
    Error::UndeclaredSymbol(format!("`{name}` at {}:{}", pos.line, pos.column))
}

impl Model for SuperFunction {
    fn from_rational(q: &Q, cfg: &SessionConfig) -> Self {
        SuperFunction::rational(q.clone(), cfg.truncation)
    }

    fn symbol(name: &str, pos: Pos, cfg: &SessionConfig) -> Result<Self> {
        match name {
            "x" => return Ok(SuperFunction::x(cfg.truncation)),
            "xi" => return Ok(SuperFunction::xi(cfg.truncation)),
            _ => {}
        }
        match cfg.generators.iter().position(|g| g == name) {
            Some(i) => Ok(SuperFunction::generator(i, cfg.truncation)),
            None => Err(undeclared(name, pos)),
        }
    }

    fn render(&self, cfg: &SessionConfig) -> String {
        crate::scalars::superfunction::format_superfunction(self, &cfg.generators)
    }

    fn terms(&self, cfg: &SessionConfig) -> Vec<(Q, Vec<String>)> {
        let mut t = series_terms(self.f0(), &cfg.generators, None);
        t.extend(series_terms(self.f1(), &cfg.generators, Some("xi")));
        t
    }
}

impl Model for SymbolicScalar {
    fn from_rational(q: &Q, _cfg: &SessionConfig) -> Self {
        SymbolicScalar::rational(q.clone())
    }

    fn symbol(name: &str, pos: Pos, cfg: &SessionConfig) -> Result<Self> {
        if name == "x" || name == "xi" {
            return Err(Error::ModelMismatch(format!(
                "`{name}` (at {}:{}) needs the concrete model",
                pos.line, pos.column
            )));
        }
        match cfg.symbols.get(name) {
            Some(s) if s.constant => Ok(SymbolicScalar::constant(name, s.parity)),
            Some(s) => Ok(SymbolicScalar::symbol(name, s.parity)),
            None => Err(undeclared(name, pos)),
        }
    }

    fn render(&self, _cfg: &SessionConfig) -> String {
        self.to_string()
    }

    fn terms(&self, _cfg: &SessionConfig) -> Vec<(Q, Vec<String>)> {
        // Each monomial's text is one factor list.
        SymbolicScalar::terms(self)
            .map(|(m, c)| {
                let text = m.to_string();
                let factors = if text == "1" {
                    Vec::new()
                } else {
                    text.split('*').map(str::to_string).collect()
                };
                (c.clone(), factors)
            })
            .collect()
    }
}

/// Either a scalar or an operator.
#[derive(Clone, Debug)]
pub enum Val<S: Scalar> {
    Scalar(S),
    Op(SuperDiffOp<S>),
}

impl<S: Model> Val<S> {
    fn into_op(self) -> SuperDiffOp<S> {
        match self {
            Val::Scalar(s) => SuperDiffOp::scalar(s),
            Val::Op(o) => o,
        }
    }
}

pub struct Evaluator<'a> {
    pub cfg: &'a SessionConfig,
}

impl<'a> Evaluator<'a> {
    pub fn new(cfg: &'a SessionConfig) -> Self {
        Evaluator { cfg }
    }

    fn template<S: Model>(&self) -> S {
        S::from_rational(&Q::one(), self.cfg)
    }

    pub fn value<S: Model>(&self, e: &Expr) -> Result<Val<S>> {
        let cfg = self.cfg;
        Ok(match &e.kind {
            ExprKind::Num(n) => Val::Scalar(S::from_rational(&literal(n), cfg)),
            ExprKind::Symbol(s) => Val::Scalar(S::symbol(s, e.pos, cfg)?),
            ExprKind::DPower(k) => Val::Op(SuperDiffOp::d_power(&self.template::<S>(), *k)),
            ExprKind::Apply(k, inner) => {
                let f = self.scalar::<S>(inner)?;
                Val::Scalar(f.superderivative_n(*k))
            }
            ExprKind::Neg(a) => match self.value::<S>(a)? {
                Val::Scalar(s) => Val::Scalar(s.negate()),
                Val::Op(o) => Val::Op(o.neg()),
            },
            ExprKind::Add(a, b) | ExprKind::Sub(a, b) => {
                let minus = matches!(e.kind, ExprKind::Sub(..));
                let (l, r) = (self.value::<S>(a)?, self.value::<S>(b)?);
                match (l, r) {
                    (Val::Scalar(x), Val::Scalar(y)) => {
                        Val::Scalar(if minus { x.minus(&y) } else { x.plus(&y) })
                    }
                    (l, r) => {
                        let (l, r) = (l.into_op(), r.into_op());
                        Val::Op(if minus { l.sub(&r) } else { l.add(&r) })
                    }
                }
            }
            ExprKind::Mul(a, b) => {
                let l = self.value::<S>(a)?;
                let r = self.value::<S>(b)?;
                match (l, r) {
                    (Val::Scalar(x), Val::Scalar(y)) => Val::Scalar(x.times(&y)),
                    (Val::Scalar(x), Val::Op(o)) => Val::Op(o.left_mul(&x)),
                    (Val::Op(_), _) => {
                        return Err(parse_error(
                            e.pos,
                            "an operator can only be multiplied from the left; use `o` to compose",
                        ))
                    }
                }
            }
            ExprKind::Div(a, b) => {
                let inv = self.scalar::<S>(b)?.try_inverse()?;
                match self.value::<S>(a)? {
                    Val::Scalar(x) => Val::Scalar(x.times(&inv)),
                    Val::Op(_) => {
                        return Err(parse_error(e.pos, "an operator cannot be divided"))
                    }
                }
            }
            ExprKind::Pow(a, k) => {
                let base = self.scalar::<S>(a)?;
                Val::Scalar(power(&base, *k)?)
            }
            ExprKind::Compose(parts) => {
                let mut acc: Option<SuperDiffOp<S>> = None;
                for p in parts {
                    let o = self.value::<S>(p)?.into_op();
                    acc = Some(match acc {
                        None => o,
                        Some(a) => a.compose(&o),
                    });
                }
                Val::Op(acc.expect("non-empty composition"))
            }
        })
    }

    pub fn scalar<S: Model>(&self, e: &Expr) -> Result<S> {
        match self.value::<S>(e)? {
            Val::Scalar(s) => Ok(s),
            Val::Op(_) => Err(parse_error(e.pos, "expected a function, found an operator")),
        }
    }

    pub fn operator<S: Model>(&self, e: &Expr) -> Result<SuperDiffOp<S>> {
        Ok(self.value::<S>(e)?.into_op())
    }
}

fn power<S: Model>(base: &S, k: i64) -> Result<S> {
    let b = if k < 0 { base.try_inverse()? } else { base.clone() };
    let mut acc = base.one_like();
    for _ in 0..k.unsigned_abs() {
        acc = acc.times(&b);
    }
    Ok(acc)
}

pub fn parity_text<S: Scalar>(s: &S) -> &'static str {
    if s.is_zero() {
        "zero"
    } else {
        match s.parity() {
            Some(Parity::Even) => "even",
            Some(Parity::Odd) => "odd",
            None => "mixed",
        }
    }
}

fn op_parity_text<S: Scalar>(o: &SuperDiffOp<S>) -> &'static str {
    if o.is_zero() {
        return "zero";
    }
    match o.parity() {
        Some(Parity::Even) => "even",
        Some(Parity::Odd) => "odd",
        None => "mixed",
    }
}

fn terms_json(terms: Vec<(Q, Vec<String>)>) -> Value {
    Value::Array(
        terms
            .into_iter()
            .map(|(q, f)| json!({ "coeff": rational(&q), "factors": f }))
            .collect(),
    )
}

/// Canonical text and structured records.
pub struct Printer<'a> {
    pub cfg: &'a SessionConfig,
}

impl<'a> Printer<'a> {
    pub fn scalar<S: Model>(&self, s: &S) -> String {
        s.render(self.cfg)
    }

    pub fn op<S: Model>(&self, o: &SuperDiffOp<S>) -> String {
        o.render(&|a| a.render(self.cfg))
    }

    pub fn matrix<S: Model>(&self, m: &FormatMatrix<S>) -> String {
        m.render(&|a| a.render(self.cfg))
    }

    pub fn scalar_json<S: Model>(&self, s: &S) -> Value {
        json!({
            "text": self.scalar(s),
            "parity": parity_text(s),
            "terms": terms_json(s.terms(self.cfg)),
        })
    }

    pub fn op_json<S: Model>(&self, o: &SuperDiffOp<S>) -> Value {
        let m = o.order();
        let coeffs: Vec<Value> = (0..=m)
            .rev()
            .map(|p| {
                let c = o.power_coeff(p);
                let mut v = self.scalar_json(&c);
                v["power"] = json!(p);
                v
            })
            .filter(|v| v["parity"] != "zero")
            .collect();
        json!({
            "text": self.op(o),
            "order": o.effective_order().unwrap_or(0),
            "parity": op_parity_text(o),
            "coeffs": coeffs,
        })
    }

    pub fn value_json<S: Model>(&self, v: &Val<S>) -> Value {
        match v {
            Val::Scalar(s) => {
                let mut j = self.scalar_json(s);
                j["kind"] = json!("function");
                j
            }
            Val::Op(o) => {
                let mut j = self.op_json(o);
                j["kind"] = json!("operator");
                j
            }
        }
    }
}
