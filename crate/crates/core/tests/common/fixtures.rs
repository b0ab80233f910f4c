//! The `tests/fixtures/cli` corpus.
//!
//! Each `tests/fixtures/cli/*.case` file has the form
//!
//! ```text
//! args: darboux elementary
//! exit: 0
//! --- input
//! D^2
//! 1
//! --- output
//! M = D
//! ...
//! ```
//!
//! The output section is compared with stdout on success and stderr
//! otherwise. Set `SUPERLINE_BLESS=1` to rewrite the expected sections.

use std::fs;
use std::path::{Path, PathBuf};

use superline::cli::run;

pub struct Case {
    pub path: PathBuf,
    pub args: Vec<String>,
    pub exit: i32,
    pub input: String,
    pub output: String,
}

pub fn parse_case(path: &Path) -> Case {
    let text = fs::read_to_string(path).unwrap();
    let mut args = None;
    let mut exit = None;
    let mut section: Option<&str> = None;
    let mut input = String::new();
    let mut output = String::new();
    for line in text.lines() {
        match line {
            "--- input" => section = Some("input"),
            "--- output" => section = Some("output"),
            _ => match section {
                Some("input") => {
                    input.push_str(line);
                    input.push('\n');
                }
                Some(_) => {
                    output.push_str(line);
                    output.push('\n');
                }
                None => {
                    if let Some(a) = line.strip_prefix("args:") {
                        args = Some(a.split_whitespace().map(String::from).collect());
                    } else if let Some(e) = line.strip_prefix("exit:") {
                        exit = Some(e.trim().parse().unwrap());
                    } else if !line.trim().is_empty() {
                        panic!("{}: unexpected header line `{line}`", path.display());
                    }
                }
            },
        }
    }
    Case {
        path: path.to_path_buf(),
        args: args.unwrap_or_else(|| panic!("{}: missing args", path.display())),
        exit: exit.unwrap_or(0),
        input,
        output,
    }
}

pub fn cases() -> Vec<Case> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/cli");
    let mut paths: Vec<PathBuf> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "case"))
        .collect();
    paths.sort();
    assert!(paths.len() >= 30, "fixture corpus is too small");
    paths.iter().map(|p| parse_case(p)).collect()
}

pub fn invoke(args: &[String], input: &str) -> superline::cli::Outcome {
    let argv = std::iter::once("superline".to_string()).chain(args.iter().cloned());
    run(argv, &mut input.as_bytes())
}

pub fn render_case(c: &Case, exit: i32, output: &str) -> String {
    let mut s = format!("args: {}\nexit: {exit}\n", c.args.join(" "));
    if !c.input.is_empty() {
        s.push_str("--- input\n");
        s.push_str(&c.input);
    }
    s.push_str("--- output\n");
    s.push_str(output);
    s
}

/// Session lines of a case input, to re-evaluate its outputs.
pub fn prelude(input: &str) -> String {
    input
        .lines()
        .filter(|l| {
            let w = l.split_whitespace().next().unwrap_or("");
            matches!(w, "declare" | "model" | "trunc")
        })
        .map(|l| format!("{l}\n"))
        .collect()
}


/// Right-hand sides that are expressions (not vectors, verdicts or
/// dimensions).
pub fn printed_expressions(out: &str) -> Vec<String> {
    out.lines()
        .filter(|l| !l.starts_with("n = ") && !l.starts_with("compat "))
        .filter_map(|l| {
            let rhs = match l.split_once(" = ") {
                Some((_, rhs)) => rhs,
                None => l,
            };
            let skip = rhs.is_empty()
                || rhs.starts_with('[')
                || rhs.contains('|')
                || rhs == "holds"
                || rhs == "fails";
            (!skip).then(|| rhs.to_string())
        })
        .collect()
}
