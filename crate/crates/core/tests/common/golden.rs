//! Transcribed dressing formulas, their canonical forms and a division
//! oracle for individual formulas.

use std::fs;
use std::path::{Path, PathBuf};

use superline::cli::parse::{parse_document, Item, ModelName};
use superline::cli::session::{Evaluator, OutputFormat, SessionConfig};
use superline::cli::run;
use superline::darboux::dressing::generic_operator;
use superline::superop::{divide_right, SuperDiffOp};
use superline::{Parity, SymbolicScalar, Truncation};

pub const PRELUDE: &str = "declare odd a1 a3 c1 c3 mu alpha\n\
                           declare even a2 a4 c2 u\n\
                           declare constant even s\n";

/// Golden sets: file stem and the `darboux dress` arguments producing it.
pub const SETS: &[(&str, &[&str])] = &[
    ("n1", &["--n", "1"]),
    ("n2", &["--n", "2"]),
    ("n3", &["--n", "3"]),
    ("n4_elementary", &["--n", "4", "--r", "1", "--mu"]),
    ("sturm_liouville", &["--n", "4", "--sturm-liouville"]),
];

pub fn dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// One `name = formula` line under a block header such as
/// `n = 3, r odd (r = 2s+1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Formula {
    pub header: String,
    pub name: String,
    pub rhs: String,
}

pub fn parse(text: &str) -> Vec<Formula> {
    let mut header = String::new();
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim_end();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.starts_with("n = ") {
            header = line.to_string();
            continue;
        }
        let (name, rhs) = line.split_once(" = ").expect("formula line");
        out.push(Formula {
            header: header.clone(),
            name: name.to_string(),
            rhs: rhs.to_string(),
        });
    }
    out
}

pub fn render(formulas: &[Formula]) -> String {
    let mut s = String::new();
    let mut header = None;
    for f in formulas {
        if header != Some(&f.header) {
            if header.is_some() {
                s.push('\n');
            }
            s.push_str(&f.header);
            s.push('\n');
            header = Some(&f.header);
        }
        s.push_str(&format!("{} = {}\n", f.name, f.rhs));
    }
    s
}

fn cli(args: &[&str], input: &str) -> String {
    let argv = ["superline"].iter().chain(args).map(|s| s.to_string());
    let out = run(argv, &mut input.as_bytes());
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    out.stdout
}

/// Normal form of a formula as printed by `compose`.
pub fn canonical(rhs: &str) -> String {
    cli(&["--model", "symbolic", "compose"], &format!("{PRELUDE}{rhs}\n"))
        .trim_end()
        .to_string()
}

pub fn transcribed(stem: &str) -> Vec<Formula> {
    parse(&fs::read_to_string(dir().join(format!("transcribed/{stem}.txt"))).unwrap())
}

pub fn golden(stem: &str) -> Vec<Formula> {
    parse(&fs::read_to_string(dir().join(format!("dressing/{stem}.txt"))).unwrap())
}

pub fn canonicalize(formulas: &[Formula]) -> Vec<Formula> {
    formulas
        .iter()
        .map(|f| Formula {
            rhs: canonical(&f.rhs),
            ..f.clone()
        })
        .collect()
}

pub fn dressed(stem: &str) -> Vec<Formula> {
    let args = SETS.iter().find(|(s, _)| *s == stem).unwrap().1;
    let mut argv = vec!["darboux", "dress"];
    argv.extend(args);
    parse(&cli(&argv, ""))
}

fn scalar(rhs: &str) -> SymbolicScalar {
    let doc = parse_document(&format!("{PRELUDE}{rhs}\n")).unwrap();
    let cfg = SessionConfig::from_document(
        &doc,
        Some(ModelName::Symbolic),
        Truncation::default(),
        OutputFormat::Text,
    )
    .unwrap();
    let Some(Item::Expr(e)) = doc.items.last() else {
        panic!("`{rhs}` is not an expression")
    };
    Evaluator::new(&cfg).scalar::<SymbolicScalar>(e).unwrap()
}

/// Order of the operator a formula block belongs to, and whether the
/// block is for odd orders of M (`None` for a block with a fixed order).
fn block(header: &str) -> (usize, Option<bool>) {
    let n = header["n = ".len()..]
        .split(',')
        .next()
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    let odd = if header.contains("r odd") {
        Some(true)
    } else if header.contains("r even") {
        Some(false)
    } else {
        None
    };
    (n, odd)
}

/// Checks a formula against the quotient `L₁` of `M∘L₀` by `M` for each
/// order of `M` in `orders` compatible with its block, with `s = r div 2`
/// and `c_j = 0` for `j > r`. Returns the orders where it fails.
pub fn oracle_failures(stem: &str, f: &Formula, orders: std::ops::RangeInclusive<usize>) -> Vec<usize> {
    let (n, odd) = block(&f.header);
    let sturm = stem == "sturm_liouville";
    let elementary = stem == "n4_elementary";
    let expr = scalar(&f.rhs);
    let l0 = if sturm {
        let one = SymbolicScalar::one();
        let zero = SymbolicScalar::zero();
        SuperDiffOp::new(vec![
            one,
            zero.clone(),
            zero,
            SymbolicScalar::symbol("alpha", Parity::Odd),
            SymbolicScalar::symbol("u", Parity::Even),
        ])
    } else {
        generic_operator("a", n)
    };
    let index = match f.name.as_str() {
        "beta" => 3,
        "w" => 4,
        b => b[1..].parse().unwrap(),
    };
    let mut failures = Vec::new();
    for r in orders {
        if odd.is_some_and(|o| o != (r % 2 == 1)) || (odd.is_none() && r != 1) {
            continue;
        }
        let m = generic_operator("c", r);
        let (q, _) = divide_right(&m.compose(&l0), &m).unwrap();
        let s = SymbolicScalar::integer((r / 2) as i64);
        let value = expr
            .evaluate(&SymbolicScalar::zero(), &mut |v| {
                let name = v.name();
                if name == "s" {
                    return Some(s.clone());
                }
                if elementary && name == "mu" {
                    return Some(SymbolicScalar::symbol("c1", Parity::Odd));
                }
                match name.strip_prefix('c').and_then(|j| j.parse::<usize>().ok()) {
                    Some(j) if j > r => Some(SymbolicScalar::zero()),
                    _ => Some(SymbolicScalar::var(v.clone())),
                }
            })
            .unwrap();
        if &value != q.coeff(index) {
            failures.push(r);
        }
    }
    failures
}
