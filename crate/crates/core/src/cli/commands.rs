//! Command implementations, generic over the scalar model.

use serde_json::{json, Value};

use super::parse::{parse_error, Document, Expr, Item, Pos};
use super::session::{Evaluator, Model, OutputFormat, Printer, SessionConfig, Val};
use crate::darboux::{
    derive_dressing, derive_dressing_generic, dt_from_invariant_subspace, elementary_dt,
    factorize_dt, mu_symbol, verify_intertwining, DressingResult,
};
use crate::error::{Error, Result};
use crate::kernel::{dimension, kernel_basis};
use crate::scalars::{Parity, Scalar, SuperFunction, SymbolicScalar};
use crate::superop::{divide_left, divide_right, SuperDiffOp};
use crate::supermatrix::{
    ber, ber_star, cofactor, cofactor_star, solve_cramer, solve_row_cramer, FormatMatrix,
};
use crate::wronskian::{reconstruct_operator, wronskian, wronskian_star};

/// Lines of canonical text or structured records.
pub struct Output<'a> {
    pub printer: Printer<'a>,
    pub lines: Vec<String>,
}

impl<'a> Output<'a> {
    pub fn new(cfg: &'a SessionConfig) -> Self {
        Output {
            printer: Printer { cfg },
            lines: Vec::new(),
        }
    }

    fn structured(&self) -> bool {
        self.printer.cfg.output == OutputFormat::Structured
    }

    fn emit(&mut self, name: Option<&str>, text: String, mut record: Value) {
        if self.structured() {
            if let Some(n) = name {
                record["name"] = json!(n);
            }
            self.lines.push(record.to_string());
        } else {
            self.lines.push(match name {
                Some(n) => format!("{n} = {text}"),
                None => text,
            });
        }
    }

    pub fn scalar<S: Model>(&mut self, name: Option<&str>, s: &S) {
        let mut rec = self.printer.scalar_json(s);
        rec["kind"] = json!("function");
        self.emit(name, self.printer.scalar(s), rec);
    }

    pub fn op<S: Model>(&mut self, name: Option<&str>, o: &SuperDiffOp<S>) {
        let mut rec = self.printer.op_json(o);
        rec["kind"] = json!("operator");
        self.emit(name, self.printer.op(o), rec);
    }

    pub fn value<S: Model>(&mut self, name: Option<&str>, v: &Val<S>) {
        match v {
            Val::Scalar(s) => self.scalar(name, s),
            Val::Op(o) => self.op(name, o),
        }
    }

    pub fn vector<S: Model>(&mut self, name: Option<&str>, v: &[S]) {
        let texts: Vec<String> = v.iter().map(|s| self.printer.scalar(s)).collect();
        let rec = json!({
            "kind": "vector",
            "entries": v.iter().map(|s| self.printer.scalar_json(s)).collect::<Vec<_>>(),
        });
        self.emit(name, format!("[{}]", texts.join(", ")), rec);
    }

    pub fn note(&mut self, name: &str, text: String, record: Value) {
        self.emit(Some(name), text, record);
    }

    pub fn raw(&mut self, text: String, record: Value) {
        self.emit(None, text, record);
    }
}

/// Items of a document, consumed in order.
pub struct Inputs<'d> {
    items: std::slice::Iter<'d, Item>,
    end: Pos,
}

impl<'d> Inputs<'d> {
    pub fn new(doc: &'d Document) -> Self {
        let end = doc
            .items
            .last()
            .map(|i| i.pos())
            .unwrap_or(Pos { line: 1, column: 1 });
        Inputs {
            items: doc.items.iter(),
            end,
        }
    }

    fn next(&mut self, what: &str) -> Result<&'d Item> {
        self.items
            .next()
            .ok_or_else(|| parse_error(self.end, format!("missing input: expected {what}")))
    }

    pub fn expr(&mut self, what: &str) -> Result<&'d Expr> {
        match self.next(what)? {
            Item::Expr(e) => Ok(e),
            other => Err(parse_error(other.pos(), format!("expected {what}"))),
        }
    }

    pub fn optional_expr(&mut self) -> Option<&'d Expr> {
        match self.items.as_slice().first() {
            Some(Item::Expr(e)) => {
                self.items.next();
                Some(e)
            }
            _ => None,
        }
    }

    /// A bracketed list, or every remaining expression line.
    pub fn list(&mut self, what: &str) -> Result<Vec<&'d Expr>> {
        if let Some(Item::List(v, _)) = self.items.as_slice().first() {
            self.items.next();
            return Ok(v.iter().collect());
        }
        let mut out = Vec::new();
        while let Some(e) = self.optional_expr() {
            out.push(e);
        }
        if out.is_empty() {
            return Err(parse_error(self.end, format!("missing input: expected {what}")));
        }
        Ok(out)
    }

    pub fn matrix(&mut self) -> Result<&'d Item> {
        match self.next("a matrix")? {
            m @ Item::Matrix { .. } => Ok(m),
            other => Err(parse_error(other.pos(), "expected a matrix literal")),
        }
    }

    pub fn finish(mut self) -> Result<()> {
        match self.items.next() {
            Some(item) => Err(parse_error(item.pos(), "unexpected extra input")),
            None => Ok(()),
        }
    }
}

pub struct Ctx<'a> {
    pub eval: Evaluator<'a>,
}

impl<'a> Ctx<'a> {
    pub fn new(cfg: &'a SessionConfig) -> Self {
        Ctx {
            eval: Evaluator::new(cfg),
        }
    }

    fn scalars<S: Model>(&self, es: &[&Expr]) -> Result<Vec<S>> {
        es.iter().map(|e| self.eval.scalar::<S>(e)).collect()
    }

    pub fn matrix<S: Model>(&self, item: &Item) -> Result<FormatMatrix<S>> {
        let Item::Matrix {
            format,
            wrong,
            rows,
            ..
        } = item
        else {
            unreachable!("checked by Inputs::matrix")
        };
        let entries = rows
            .iter()
            .map(|r| r.iter().map(|e| self.eval.scalar::<S>(e)).collect())
            .collect::<Result<Vec<Vec<S>>>>()?;
        Ok(FormatMatrix::new(entries, format.clone())?.with_wrong(*wrong))
    }
}

pub fn compose<S: Model>(ctx: &Ctx, doc: &Document, out: &mut Output) -> Result<()> {
    let mut inputs = Inputs::new(doc);
    let first = inputs.expr("an expression")?;
    let mut acc = ctx.eval.value::<S>(first)?;
    while let Some(e) = inputs.optional_expr() {
        let next = ctx.eval.operator::<S>(e)?;
        let left = match acc {
            Val::Scalar(s) => SuperDiffOp::scalar(s),
            Val::Op(o) => o,
        };
        acc = Val::Op(left.compose(&next));
    }
    inputs.finish()?;
    out.value(None, &acc);
    Ok(())
}

pub fn apply<S: Model>(ctx: &Ctx, doc: &Document, out: &mut Output) -> Result<()> {
    let mut inputs = Inputs::new(doc);
    let l = ctx.eval.operator::<S>(inputs.expr("an operator")?)?;
    let f = ctx.eval.scalar::<S>(inputs.expr("a function")?)?;
    inputs.finish()?;
    out.scalar(None, &l.apply(&f));
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Side {
    /// `N = Q∘M + R`
    Right,
    /// `N = M∘Q + R`
    Left,
}

pub fn divide<S: Model>(ctx: &Ctx, doc: &Document, side: Side, out: &mut Output) -> Result<()> {
    let mut inputs = Inputs::new(doc);
    let n = ctx.eval.operator::<S>(inputs.expr("the dividend")?)?;
    let m = ctx.eval.operator::<S>(inputs.expr("the divisor")?)?;
    inputs.finish()?;
    let (q, r) = match side {
        Side::Right => divide_right(&n, &m)?,
        Side::Left => divide_left(&n, &m)?,
    };
    out.op(Some("Q"), &q);
    out.op(Some("R"), &r);
    Ok(())
}

pub fn berezinian<S: Model>(ctx: &Ctx, doc: &Document, star: bool, out: &mut Output) -> Result<()> {
    let mut inputs = Inputs::new(doc);
    let a = ctx.matrix::<S>(inputs.matrix()?)?;
    inputs.finish()?;
    if star {
        out.scalar(Some("Ber*"), &ber_star(&a)?);
    } else {
        out.scalar(Some("Ber"), &ber(&a)?);
    }
    Ok(())
}

pub fn cofactor_cmd<S: Model>(
    ctx: &Ctx,
    doc: &Document,
    i: usize,
    j: usize,
    star: bool,
    out: &mut Output,
) -> Result<()> {
    let mut inputs = Inputs::new(doc);
    let a = ctx.matrix::<S>(inputs.matrix()?)?;
    inputs.finish()?;
    if i >= a.nrows() || j >= a.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "cofactor ({i}, {j}) of a {}x{} matrix",
            a.nrows(),
            a.ncols()
        )));
    }
    if star {
        out.scalar(Some(&format!("adj*[{i}][{j}]")), &cofactor_star(&a, i, j)?);
    } else {
        out.scalar(Some(&format!("adj[{i}][{j}]")), &cofactor(&a, i, j)?);
    }
    Ok(())
}

pub fn cramer<S: Model>(ctx: &Ctx, doc: &Document, row: bool, out: &mut Output) -> Result<()> {
    let mut inputs = Inputs::new(doc);
    let a = ctx.matrix::<S>(inputs.matrix()?)?;
    let b: Vec<S> = ctx.scalars(&inputs.list("the right-hand side")?)?;
    inputs.finish()?;
    let x = if row {
        solve_row_cramer(&a, &b)?
    } else {
        solve_cramer(&a, &b)?
    };
    out.vector(Some("x"), &x);
    Ok(())
}

pub fn wronskian_cmd<S: Model>(
    ctx: &Ctx,
    doc: &Document,
    star: bool,
    out: &mut Output,
) -> Result<()> {
    let mut inputs = Inputs::new(doc);
    let fs: Vec<S> = ctx.scalars(&inputs.list("functions")?)?;
    inputs.finish()?;
    if star {
        out.scalar(Some("W*"), &wronskian_star(&fs)?);
    } else {
        out.scalar(Some("W"), &wronskian(&fs)?);
    }
    Ok(())
}

pub fn reconstruct<S: Model>(ctx: &Ctx, doc: &Document, out: &mut Output) -> Result<()> {
    let mut inputs = Inputs::new(doc);
    let fs: Vec<S> = ctx.scalars(&inputs.list("a kernel basis")?)?;
    inputs.finish()?;
    out.op(Some("L"), &reconstruct_operator(&fs)?);
    Ok(())
}

pub fn kernel(
    ctx: &Ctx,
    doc: &Document,
    order: Option<usize>,
    out: &mut Output,
) -> Result<()> {
    let mut inputs = Inputs::new(doc);
    let e = inputs.expr("an operator")?;
    let l = ctx.eval.operator::<SuperFunction>(e)?;
    inputs.finish()?;
    if let Some(n) = order {
        if l.effective_order() != Some(n) {
            return Err(Error::DimensionMismatch(format!(
                "expected an operator of order {n}, got {}",
                l.effective_order().unwrap_or(0)
            )));
        }
    }
    let basis = kernel_basis(&l.trimmed(), ctx.eval.cfg.truncation)?;
    for (i, f) in basis.iter().enumerate() {
        out.scalar(Some(&format!("phi{i}")), f);
    }
    let (p, q) = dimension(&basis)?;
    out.note(
        "dim",
        format!("{p}|{q}"),
        json!({ "kind": "dimension", "even": p, "odd": q }),
    );
    Ok(())
}

pub fn elementary<S: Model>(ctx: &Ctx, doc: &Document, out: &mut Output) -> Result<()> {
    let mut inputs = Inputs::new(doc);
    let l0 = ctx.eval.operator::<S>(inputs.expr("the operator L0")?)?;
    let phi = ctx.eval.scalar::<S>(inputs.expr("an eigenfunction")?)?;
    let lambda = match inputs.optional_expr() {
        Some(e) => Some(ctx.eval.scalar::<S>(e)?),
        None => None,
    };
    inputs.finish()?;
    let dt = elementary_dt(&l0, &phi, lambda.as_ref())?;
    out.op(Some("M"), &dt.m);
    out.scalar(Some("lambda"), &dt.lambda);
    out.op(Some("L1"), &dt.l1);
    Ok(())
}

pub fn factorize<S: Model>(ctx: &Ctx, doc: &Document, out: &mut Output) -> Result<()> {
    let mut inputs = Inputs::new(doc);
    let l0 = ctx.eval.operator::<S>(inputs.expr("the operator L0")?)?;
    let flag: Vec<S> = ctx.scalars(&inputs.list("a flag basis")?)?;
    inputs.finish()?;
    let chain = factorize_dt(&l0, &flag)?;
    let direct = dt_from_invariant_subspace(&l0, &flag)?;
    if direct != chain.composed {
        return Err(Error::FlagNotInGeneralPosition(
            "the chain and the Wronskian formula disagree".into(),
        ));
    }
    for (k, step) in chain.steps.iter().enumerate() {
        out.op(Some(&format!("M{}", k + 1)), &step.m);
        out.scalar(Some(&format!("lambda{}", k + 1)), &step.lambda);
        out.op(Some(&format!("L{}", k + 1)), &step.l1);
    }
    out.op(Some("M"), &chain.composed);
    Ok(())
}

pub fn verify<S: Model>(ctx: &Ctx, doc: &Document, out: &mut Output) -> Result<()> {
    let mut inputs = Inputs::new(doc);
    let l0 = ctx.eval.operator::<S>(inputs.expr("L0")?)?;
    let l1 = ctx.eval.operator::<S>(inputs.expr("L1")?)?;
    let m = ctx.eval.operator::<S>(inputs.expr("M")?)?;
    inputs.finish()?;
    let residual = verify_intertwining(&l0, &l1, &m).trimmed();
    out.op(Some("residual"), &residual);
    let holds = residual.is_zero();
    out.note(
        "intertwining",
        if holds { "holds" } else { "fails" }.to_string(),
        json!({ "kind": "verdict", "holds": holds }),
    );
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DressSpec {
    Concrete(usize),
    Odd,
    Even,
    /// Both parity blocks.
    Generic,
}

impl std::str::FromStr for DressSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "odd" => Ok(DressSpec::Odd),
            "even" => Ok(DressSpec::Even),
            "generic" => Ok(DressSpec::Generic),
            _ => match s.parse::<usize>() {
                Ok(r) if r > 0 => Ok(DressSpec::Concrete(r)),
                _ => Err(format!("expected a positive order, `odd`, `even` or `generic`, got `{s}`")),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct DressOptions {
    /// Rename `c1` to `mu` (first-order `M` only).
    pub mu: bool,
    /// `n = 4` with `a1 = a2 = 0`, printed as `beta`, `w` in terms of
    /// `alpha`, `u`.
    pub sturm_liouville: bool,
    pub compat: bool,
}

fn dress_blocks(n: usize, spec: DressSpec, opts: DressOptions) -> Result<Vec<DressingResult>> {
    if n == 0 {
        return Err(Error::DimensionMismatch("dressing needs n >= 1".into()));
    }
    if opts.sturm_liouville && n != 4 {
        return Err(Error::DimensionMismatch(
            "the Sturm-Liouville form has n = 4".into(),
        ));
    }
    if opts.mu && spec != DressSpec::Concrete(1) {
        return Err(Error::DimensionMismatch("`--mu` needs r = 1".into()));
    }
    let blocks = match spec {
        DressSpec::Concrete(r) => vec![derive_dressing(n, r)],
        DressSpec::Odd => vec![derive_dressing_generic(n, Parity::Odd)],
        DressSpec::Even => vec![derive_dressing_generic(n, Parity::Even)],
        DressSpec::Generic => vec![
            derive_dressing_generic(n, Parity::Odd),
            derive_dressing_generic(n, Parity::Even),
        ],
    };
    Ok(blocks
        .into_iter()
        .map(|mut b| {
            if opts.mu {
                b = b.substitute("c1", &mu_symbol());
            }
            if opts.sturm_liouville {
                let zero = SymbolicScalar::zero();
                b = b
                    .substitute("a1", &zero)
                    .substitute("a2", &zero)
                    .substitute("a3", &SymbolicScalar::symbol("alpha", Parity::Odd))
                    .substitute("a4", &SymbolicScalar::symbol("u", Parity::Even));
            }
            if !opts.compat {
                b.compatibility.clear();
            }
            b
        })
        .collect())
}

pub fn dress(n: usize, spec: DressSpec, opts: DressOptions, out: &mut Output) -> Result<()> {
    let names: Vec<String> = if opts.sturm_liouville {
        ["b1", "b2", "beta", "w"].map(String::from).to_vec()
    } else {
        (1..=n).map(|k| format!("b{k}")).collect()
    };
    for (i, block) in dress_blocks(n, spec, opts)?.iter().enumerate() {
        if i > 0 && !out.structured() {
            out.lines.push(String::new());
        }
        let order = block.r.to_string();
        out.raw(
            format!("n = {}, {order}", block.n),
            json!({ "kind": "dressing", "n": block.n, "r": order }),
        );
        for (k, b) in block.b.iter().enumerate() {
            if opts.sturm_liouville && k < 2 && b.is_zero() {
                continue;
            }
            out.scalar(Some(&names[k]), b);
        }
        let c = block.compatibility.len();
        for (j, e) in block.compatibility.iter().enumerate() {
            let mut rec = out.printer.scalar_json(e);
            rec["kind"] = json!("compatibility");
            rec["power"] = json!(c - 1 - j);
            out.emit(
                Some(&format!("compat D^{}", c - 1 - j)),
                format!("{} = 0", out.printer.scalar(e)),
                rec,
            );
        }
    }
    Ok(())
}
