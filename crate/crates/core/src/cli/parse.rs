//! Lexer, expression grammar and the line-oriented document format.
//!
//! A document is a sequence of lines. Directives (`model`, `trunc`,
//! `declare`, `format`, `wrong`) configure the session; every other line is
//! an input item: an expression, a bracketed list, or a matrix literal
//! following a `format` header. Brackets may span lines. `#` starts a
//! comment.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::scalars::{Parity, Q};
use crate::supermatrix::{Line, MatrixFormat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

pub fn parse_error(pos: Pos, message: impl Into<String>) -> Error {
    Error::Parse {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    D,
    Dx,
    Compose,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(n) => format!("number `{n}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::D => "`D`".into(),
            Tok::Dx => "`∂`".into(),
            Tok::Compose => "`o`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
        }
    }
}

/// Source text with the original position of every character.
type Chars = [(char, Pos)];

fn lex(src: &Chars) -> Result<Vec<(Tok, Pos)>> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < src.len() {
        let (c, pos) = src[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < src.len() && src[i].0.is_ascii_digit() {
                i += 1;
            }
            let text: String = src[start..i].iter().map(|(c, _)| c).collect();
            out.push((Tok::Num(text.parse().expect("digits")), pos));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < src.len() && (src[i].0.is_alphanumeric() || src[i].0 == '_') {
                i += 1;
            }
            let text: String = src[start..i].iter().map(|(c, _)| c).collect();
            let tok = match text.as_str() {
                "D" => Tok::D,
                "o" => Tok::Compose,
                "ξ" => Tok::Ident("xi".into()),
                "∂" => Tok::Dx,
                _ => Tok::Ident(text),
            };
            out.push((tok, pos));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' | '·' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            '∘' => Tok::Compose,
            '∂' => Tok::Dx,
            _ => return Err(parse_error(pos, format!("unexpected character `{c}`"))),
        };
        out.push((tok, pos));
        i += 1;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Num(BigInt),
    Symbol(String),
    /// The operator `Dᵏ` (`∂` is `D²`).
    DPower(usize),
    /// `Dᵏ(f)`, the superderivative applied to a scalar.
    Apply(usize, Box<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Compose(Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

impl Expr {
    fn new(kind: ExprKind, pos: Pos) -> Self {
        Expr { kind, pos }
    }
}

struct Parser<'a> {
    toks: &'a [(Tok, Pos)],
    at: usize,
    end: Pos,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<(Tok, Pos)> {
        let t = self.toks.get(self.at).cloned();
        self.at += 1;
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> Result<Pos> {
        let pos = self.pos();
        match self.bump() {
            Some((got, p)) if &got == t => Ok(p),
            Some((got, p)) => Err(parse_error(
                p,
                format!("expected {}, found {}", t.describe(), got.describe()),
            )),
            None => Err(parse_error(pos, format!("expected {}, found end of input", t.describe()))),
        }
    }

    fn done(&self) -> bool {
        self.at >= self.toks.len()
    }

    /// `sum ('o' sum)*`
    fn expr(&mut self) -> Result<Expr> {
        let pos = self.pos();
        let mut parts = vec![self.sum()?];
        while self.eat(&Tok::Compose) {
            parts.push(self.sum()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().expect("one part")
        } else {
            Expr::new(ExprKind::Compose(parts), pos)
        })
    }

    fn sum(&mut self) -> Result<Expr> {
        let pos = self.pos();
        let mut acc = if self.eat(&Tok::Minus) {
            let t = self.product()?;
            Expr::new(ExprKind::Neg(Box::new(t)), pos)
        } else {
            self.product()?
        };
        loop {
            let pos = self.pos();
            if self.eat(&Tok::Plus) {
                let t = self.product()?;
                acc = Expr::new(ExprKind::Add(Box::new(acc), Box::new(t)), pos);
            } else if self.eat(&Tok::Minus) {
                let t = self.product()?;
                acc = Expr::new(ExprKind::Sub(Box::new(acc), Box::new(t)), pos);
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut acc = self.power()?;
        loop {
            let pos = self.pos();
            if self.eat(&Tok::Star) {
                let f = self.power()?;
                acc = Expr::new(ExprKind::Mul(Box::new(acc), Box::new(f)), pos);
            } else if self.eat(&Tok::Slash) {
                let f = self.power()?;
                acc = Expr::new(ExprKind::Div(Box::new(acc), Box::new(f)), pos);
            } else {
                if let Some(t) = self.peek() {
                    if matches!(
                        t,
                        Tok::Num(_) | Tok::Ident(_) | Tok::D | Tok::Dx | Tok::LParen
                    ) {
                        return Err(parse_error(
                            self.pos(),
                            format!(
                                "unexpected {} after a factor; products need `*` and compositions `o`",
                                t.describe()
                            ),
                        ));
                    }
                }
                return Ok(acc);
            }
        }
    }

    fn exponent(&mut self) -> Result<i64> {
        let negative = self.eat(&Tok::Minus);
        let pos = self.pos();
        match self.bump() {
            Some((Tok::Num(n), _)) => {
                let v: i64 = n
                    .try_into()
                    .map_err(|_| parse_error(pos, "exponent too large"))?;
                Ok(if negative { -v } else { v })
            }
            _ => Err(parse_error(pos, "expected an integer exponent")),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        let pos = self.pos();
        if self.eat(&Tok::Caret) {
            if matches!(base.kind, ExprKind::DPower(_)) {
                return Err(parse_error(pos, "write powers of D as `D^k`"));
            }
            let e = self.exponent()?;
            return Ok(Expr::new(ExprKind::Pow(Box::new(base), e), pos));
        }
        Ok(base)
    }

    fn d_power(&mut self, start: Pos) -> Result<usize> {
        if !self.eat(&Tok::Caret) {
            return Ok(1);
        }
        let e = self.exponent()?;
        usize::try_from(e).map_err(|_| parse_error(start, "powers of D must be non-negative"))
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        let Some((tok, _)) = self.bump() else {
            return Err(parse_error(pos, "unexpected end of input"));
        };
        match tok {
            Tok::Num(n) => Ok(Expr::new(ExprKind::Num(n), pos)),
            Tok::Ident(s) => Ok(Expr::new(ExprKind::Symbol(s), pos)),
            Tok::D | Tok::Dx => {
                let unit = if tok == Tok::Dx { 2 } else { 1 };
                let k = unit * self.d_power(pos)?;
                if self.eat(&Tok::LParen) {
                    let inner = self.expr()?;
                    self.expect(&Tok::RParen)?;
                    return Ok(Expr::new(ExprKind::Apply(k, Box::new(inner)), pos));
                }
                Ok(Expr::new(ExprKind::DPower(k), pos))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(&Tok::RParen)?;
                Ok(inner)
            }
            other => Err(parse_error(pos, format!("unexpected {}", other.describe()))),
        }
    }
}

/// A parsed bracket tree.
#[derive(Clone, Debug, PartialEq)]
pub enum Tree {
    Leaf(Expr),
    List(Vec<Tree>, Pos),
}

fn tree(p: &mut Parser<'_>) -> Result<Tree> {
    let pos = p.pos();
    if p.eat(&Tok::LBracket) {
        let mut items = Vec::new();
        if p.eat(&Tok::RBracket) {
            return Ok(Tree::List(items, pos));
        }
        loop {
            items.push(tree(p)?);
            if p.eat(&Tok::RBracket) {
                return Ok(Tree::List(items, pos));
            }
            p.expect(&Tok::Comma)?;
        }
    }
    Ok(Tree::Leaf(p.expr()?))
}

fn end_pos(src: &Chars) -> Pos {
    src.last()
        .map(|(_, p)| Pos {
            line: p.line,
            column: p.column + 1,
        })
        .unwrap_or(Pos { line: 1, column: 1 })
}

fn parse_tree(src: &Chars) -> Result<Tree> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks: &toks,
        at: 0,
        end: end_pos(src),
    };
    let t = tree(&mut p)?;
    if !p.done() {
        let (tok, pos) = &toks[p.at];
        return Err(parse_error(*pos, format!("unexpected {}", tok.describe())));
    }
    Ok(t)
}

fn positioned(text: &str, line: usize) -> Vec<(char, Pos)> {
    text.chars()
        .enumerate()
        .map(|(i, c)| (c, Pos { line, column: i + 1 }))
        .collect()
}

/// Parses a single expression (no brackets).
pub fn parse_expr(text: &str) -> Result<Expr> {
    match parse_tree(&positioned(text, 1))? {
        Tree::Leaf(e) => Ok(e),
        Tree::List(_, pos) => Err(parse_error(pos, "expected an expression, found a list")),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelName {
    Concrete,
    Symbolic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Declaration {
    pub names: Vec<String>,
    pub parity: Parity,
    pub constant: bool,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Item {
    Expr(Expr),
    List(Vec<Expr>, Pos),
    Matrix {
        format: MatrixFormat,
        wrong: Option<Line>,
        rows: Vec<Vec<Expr>>,
        pos: Pos,
    },
}

impl Item {
    pub fn pos(&self) -> Pos {
        match self {
            Item::Expr(e) => e.pos,
            Item::List(_, p) | Item::Matrix { pos: p, .. } => *p,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Document {
    pub model: Option<(ModelName, Pos)>,
    pub trunc: Option<usize>,
    pub declarations: Vec<Declaration>,
    pub items: Vec<Item>,
}

pub const RESERVED: &[&str] = &["D", "o", "x", "xi"];

struct PendingMatrix {
    format: MatrixFormat,
    wrong: Option<Line>,
    pos: Pos,
}

fn parse_labels(text: &str, pos: Pos) -> Result<Vec<Parity>> {
    text.chars()
        .map(|c| match c {
            '+' | '0' => Ok(Parity::Even),
            '-' | '1' => Ok(Parity::Odd),
            _ => Err(parse_error(pos, format!("format labels are `+` or `-`, found `{c}`"))),
        })
        .collect()
}

fn parse_format(words: &[&str], pos: Pos) -> Result<MatrixFormat> {
    let mut rows = None;
    let mut cols = None;
    for w in words {
        if let Some(v) = w.strip_prefix("rows=") {
            rows = Some(parse_labels(v, pos)?);
        } else if let Some(v) = w.strip_prefix("cols=") {
            cols = Some(parse_labels(v, pos)?);
        } else {
            return Err(parse_error(pos, format!("unknown format field `{w}`")));
        }
    }
    let rows = rows.ok_or_else(|| parse_error(pos, "format needs `rows=`"))?;
    let cols = cols.unwrap_or_else(|| rows.clone());
    Ok(MatrixFormat::new(rows, cols))
}

fn parse_index(word: Option<&&str>, pos: Pos) -> Result<usize> {
    word.and_then(|w| w.parse().ok())
        .ok_or_else(|| parse_error(pos, "expected a line index"))
}

fn parse_declaration(words: &[&str], pos: Pos) -> Result<Declaration> {
    let mut rest = words;
    let constant = matches!(rest.first(), Some(&"constant") | Some(&"const"));
    if constant {
        rest = &rest[1..];
    }
    let parity = match rest.first() {
        Some(&"odd") => Parity::Odd,
        Some(&"even") => Parity::Even,
        _ => return Err(parse_error(pos, "expected `declare [constant] odd|even name…`")),
    };
    let names: Vec<String> = rest[1..]
        .iter()
        .flat_map(|w| w.split(','))
        .filter(|w| !w.is_empty())
        .map(str::to_string)
        .collect();
    if names.is_empty() {
        return Err(parse_error(pos, "declaration names no symbols"));
    }
    for n in &names {
        let valid = n.chars().next().is_some_and(|c| c.is_alphabetic())
            && n.chars().all(|c| c.is_alphanumeric() || c == '_');
        if !valid || RESERVED.contains(&n.as_str()) {
            return Err(parse_error(pos, format!("`{n}` cannot be declared")));
        }
    }
    Ok(Declaration {
        names,
        parity,
        constant,
        pos,
    })
}

fn leaf_list(items: Vec<Tree>, what: &str) -> Result<Vec<Expr>> {
    items
        .into_iter()
        .map(|t| match t {
            Tree::Leaf(e) => Ok(e),
            Tree::List(_, p) => Err(parse_error(p, format!("nested list inside {what}"))),
        })
        .collect()
}

fn matrix_item(pending: PendingMatrix, t: Tree) -> Result<Item> {
    let Tree::List(rows, pos) = t else {
        return Err(parse_error(pending.pos, "`format` must be followed by a matrix literal"));
    };
    let rows = rows
        .into_iter()
        .map(|r| match r {
            Tree::List(cells, _) => leaf_list(cells, "a matrix row"),
            Tree::Leaf(e) => Err(parse_error(e.pos, "matrix rows must be bracketed")),
        })
        .collect::<Result<Vec<_>>>()?;
    let (nr, nc) = (pending.format.rows.len(), pending.format.cols.len());
    if rows.len() != nr || rows.iter().any(|r| r.len() != nc) {
        return Err(parse_error(
            pos,
            format!("matrix literal does not match its {nr}x{nc} format"),
        ));
    }
    Ok(Item::Matrix {
        format: pending.format,
        wrong: pending.wrong,
        rows,
        pos,
    })
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn bracket_depth(text: &str) -> i64 {
    text.chars()
        .map(|c| match c {
            '[' => 1,
            ']' => -1,
            _ => 0,
        })
        .sum()
}

pub fn parse_document(src: &str) -> Result<Document> {
    let mut doc = Document::default();
    let mut pending: Option<PendingMatrix> = None;
    let mut chunk: Vec<(char, Pos)> = Vec::new();
    let mut depth = 0i64;

    for (idx, raw) in src.lines().enumerate() {
        let line_no = idx + 1;
        let text = strip_comment(raw);
        if depth > 0 {
            chunk.push(('\n', Pos { line: line_no, column: 0 }));
            chunk.extend(positioned(text, line_no));
            depth += bracket_depth(text);
            if depth <= 0 {
                let t = parse_tree(&chunk)?;
                doc.items.push(finish_tree(t, pending.take())?);
                chunk.clear();
                depth = 0;
            }
            continue;
        }
        let trimmed = text.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = text.len() - text.trim_start().len();
        let pos = Pos {
            line: line_no,
            column: text[..indent].chars().count() + 1,
        };
        let words: Vec<&str> = trimmed.split_whitespace().collect();
        match words[0] {
            "model" => {
                let m = match words.get(1) {
                    Some(&"concrete") => ModelName::Concrete,
                    Some(&"symbolic") => ModelName::Symbolic,
                    _ => return Err(parse_error(pos, "expected `model concrete|symbolic`")),
                };
                if let Some((old, _)) = doc.model {
                    if old != m {
                        return Err(parse_error(pos, "model is already set"));
                    }
                }
                doc.model = Some((m, pos));
            }
            "trunc" => {
                let t = parse_index(words.get(1), pos)?;
                if doc.trunc.is_some_and(|old| old != t) {
                    return Err(parse_error(pos, "truncation order is already set"));
                }
                doc.trunc = Some(t);
            }
            "declare" => doc.declarations.push(parse_declaration(&words[1..], pos)?),
            "format" => {
                if pending.is_some() {
                    return Err(parse_error(pos, "previous `format` has no matrix"));
                }
                pending = Some(PendingMatrix {
                    format: parse_format(&words[1..], pos)?,
                    wrong: None,
                    pos,
                });
            }
            "wrong" => {
                let Some(p) = pending.as_mut() else {
                    return Err(parse_error(pos, "`wrong` must follow a `format` header"));
                };
                let i = parse_index(words.get(2), pos)?;
                p.wrong = Some(match words.get(1) {
                    Some(&"row") => Line::Row(i),
                    Some(&"col") | Some(&"column") => Line::Col(i),
                    _ => return Err(parse_error(pos, "expected `wrong row|col i`")),
                });
            }
            _ => {
                chunk = positioned(text, line_no);
                depth = bracket_depth(text);
                if depth <= 0 {
                    let t = parse_tree(&chunk)?;
                    doc.items.push(finish_tree(t, pending.take())?);
                    chunk.clear();
                    depth = 0;
                }
            }
        }
    }
    if depth > 0 {
        return Err(parse_error(end_pos(&chunk), "unclosed `[`"));
    }
    if let Some(p) = pending {
        return Err(parse_error(p.pos, "`format` header without a matrix"));
    }
    Ok(doc)
}

fn finish_tree(t: Tree, pending: Option<PendingMatrix>) -> Result<Item> {
    if let Some(p) = pending {
        return matrix_item(p, t);
    }
    match t {
        Tree::Leaf(e) => Ok(Item::Expr(e)),
        Tree::List(items, pos) => {
            if items.iter().any(|t| matches!(t, Tree::List(..))) {
                return Err(parse_error(pos, "a matrix literal needs a `format` header"));
            }
            Ok(Item::List(leaf_list(items, "a list")?, pos))
        }
    }
}

/// Rational value of a literal numerator.
pub fn literal(n: &BigInt) -> Q {
    Q::from_integer(n.clone())
}
