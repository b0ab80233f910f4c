//! Command-line front end.
//!
//! Every command reads a document (a file, or standard input) in the text
//! format of [`parse`], evaluates it in the session's scalar model and
//! prints canonical text, or one JSON record per line with
//! `--format structured`.
//!
//! Exit codes: 0 on success, 1 on a mathematical error, 2 on a parse or
//! usage error.

pub mod commands;
pub mod parse;
pub mod session;

use std::ffi::OsString;
use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::scalars::{SuperFunction, SymbolicScalar, Truncation};
use commands::{Ctx, DressOptions, DressSpec, Output, Side};
use parse::{parse_document, Document, ModelName};
pub use session::{OutputFormat, SessionConfig};

pub const TRUNC_ENV: &str = "SUPERLINE_TRUNC";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Structured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Concrete,
    Symbolic,
}

#[derive(Parser, Debug)]
#[command(name = "superline", version, about = "Exact algebra of differential operators on the 1|1 superline")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: FormatArg,
    /// Highest power of x kept in concrete series (a `trunc` line in the
    /// input takes precedence).
    #[arg(long, global = true, env = TRUNC_ENV)]
    trunc: Option<usize>,
    /// Scalar model; inferred from the declarations when omitted.
    #[arg(long, global = true, value_enum)]
    model: Option<ModelArg>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Input {
    /// Input file; standard input when omitted or `-`.
    input: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate and canonicalize; several lines are composed in order.
    Compose(Input),
    /// Apply an operator (first line) to a function (second line).
    Apply(Input),
    /// Divide the first operator by the second.
    Divide {
        #[arg(long, value_enum, default_value = "right")]
        side: Side,
        #[command(flatten)]
        input: Input,
    },
    /// Berezinian of a matrix.
    Ber(Input),
    /// Inverse Berezinian of a matrix.
    BerStar(Input),
    /// Cofactor (i, j) by unit replacement.
    Cofactor {
        i: usize,
        j: usize,
        /// The cofactor of Ber* instead of Ber.
        #[arg(long)]
        star: bool,
        #[command(flatten)]
        input: Input,
    },
    /// Solve A x = b (or x A = b with `--row`) by Cramer's rule.
    Cramer {
        #[arg(long)]
        row: bool,
        #[command(flatten)]
        input: Input,
    },
    /// Super Wronskian of functions of alternating parity.
    Wronskian {
        #[arg(long)]
        star: bool,
        #[command(flatten)]
        input: Input,
    },
    /// The monic operator with the given kernel basis.
    Reconstruct(Input),
    /// Kernel basis of a non-degenerate operator as truncated series.
    Kernel {
        /// Expected order of the operator.
        #[arg(long)]
        order: Option<usize>,
        #[command(flatten)]
        input: Input,
    },
    /// Darboux transformations.
    #[command(subcommand)]
    Darboux(DarbouxCommand),
    /// Residual M∘L0 − L1∘M for lines L0, L1, M.
    Verify(Input),
}

#[derive(Subcommand, Debug)]
enum DarbouxCommand {
    /// Elementary transformation from L0, an eigenfunction and optionally
    /// its eigenvalue.
    Elementary(Input),
    /// Chain of elementary transformations along a flag basis.
    Factorize(Input),
    /// Dressing formulas b_k for an order-n operator and an order-r M.
    Dress {
        #[arg(long)]
        n: usize,
        /// A positive order, `odd`, `even` or `generic` (both parities).
        #[arg(long, default_value = "generic")]
        r: DressSpec,
        /// Name the coefficient of a first-order M `mu`.
        #[arg(long)]
        mu: bool,
        /// The super Sturm-Liouville form (n = 4, a1 = a2 = 0).
        #[arg(long)]
        sturm_liouville: bool,
        /// Also print the compatibility conditions.
        #[arg(long)]
        compat: bool,
    },
}

/// Result of one invocation: printed text and the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(lines: Vec<String>) -> Self {
        let mut stdout = lines.join("\n");
        stdout.push('\n');
        Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(e: &Error, format: OutputFormat) -> Self {
        let code = exit_code(e);
        let stderr = match format {
            OutputFormat::Text => format!("error: {e}\n"),
            OutputFormat::Structured => format!(
                "{}\n",
                serde_json::json!({ "kind": "error", "error": e.kind(), "message": e.to_string() })
            ),
        };
        Outcome {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_parse() {
        2
    } else {
        1
    }
}

fn read_input(input: &Input, stdin: &mut dyn Read) -> std::result::Result<String, String> {
    match &input.input {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).map_err(|e| format!("cannot read {}: {e}", p.display()))
        }
        _ => {
            let mut s = String::new();
            stdin
                .read_to_string(&mut s)
                .map_err(|e| format!("cannot read standard input: {e}"))?;
            Ok(s)
        }
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let format = match cli.format {
        FormatArg::Text => OutputFormat::Text,
        FormatArg::Structured => OutputFormat::Structured,
    };
    let usage = |msg: String| Outcome {
        code: 2,
        stdout: String::new(),
        stderr: format!("error: {msg}\n"),
    };
    let doc = match command_input(&cli.command) {
        Some(input) => match read_input(input, stdin) {
            Ok(text) => text,
            Err(msg) => return usage(msg),
        },
        None => String::new(),
    };
    let result = parse_document(&doc).and_then(|doc| {
        let cfg = SessionConfig::from_document(
            &doc,
            cli.model.map(|m| match m {
                ModelArg::Concrete => ModelName::Concrete,
                ModelArg::Symbolic => ModelName::Symbolic,
            }),
            cli.trunc.map(Truncation).unwrap_or_default(),
            format,
        )?;
        execute(&cli.command, &doc, &cfg)
    });
    match result {
        Ok(lines) => Outcome::ok(lines),
        Err(e) => Outcome::error(&e, format),
    }
}

fn command_input(c: &Command) -> Option<&Input> {
    Some(match c {
        Command::Compose(i)
        | Command::Apply(i)
        | Command::Ber(i)
        | Command::BerStar(i)
        | Command::Reconstruct(i)
        | Command::Verify(i) => i,
        Command::Divide { input, .. }
        | Command::Cofactor { input, .. }
        | Command::Cramer { input, .. }
        | Command::Wronskian { input, .. }
        | Command::Kernel { input, .. } => input,
        Command::Darboux(DarbouxCommand::Elementary(i))
        | Command::Darboux(DarbouxCommand::Factorize(i)) => i,
        Command::Darboux(DarbouxCommand::Dress { .. }) => return None,
    })
}

fn execute(command: &Command, doc: &Document, cfg: &SessionConfig) -> Result<Vec<String>> {
    let mut out = Output::new(cfg);
    match cfg.model {
        ModelName::Concrete => dispatch::<SuperFunction>(command, doc, cfg, &mut out)?,
        ModelName::Symbolic => dispatch::<SymbolicScalar>(command, doc, cfg, &mut out)?,
    }
    Ok(out.lines)
}

fn dispatch<S: session::Model>(
    command: &Command,
    doc: &Document,
    cfg: &SessionConfig,
    out: &mut Output,
) -> Result<()> {
    let ctx = Ctx::new(cfg);
    match command {
        Command::Compose(_) => commands::compose::<S>(&ctx, doc, out),
        Command::Apply(_) => commands::apply::<S>(&ctx, doc, out),
        Command::Divide { side, .. } => commands::divide::<S>(&ctx, doc, *side, out),
        Command::Ber(_) => commands::berezinian::<S>(&ctx, doc, false, out),
        Command::BerStar(_) => commands::berezinian::<S>(&ctx, doc, true, out),
        Command::Cofactor { i, j, star, .. } => {
            commands::cofactor_cmd::<S>(&ctx, doc, *i, *j, *star, out)
        }
        Command::Cramer { row, .. } => commands::cramer::<S>(&ctx, doc, *row, out),
        Command::Wronskian { star, .. } => commands::wronskian_cmd::<S>(&ctx, doc, *star, out),
        Command::Reconstruct(_) => commands::reconstruct::<S>(&ctx, doc, out),
        Command::Kernel { order, .. } => {
            if cfg.model != ModelName::Concrete {
                return Err(Error::ModelMismatch(
                    "kernels are computed in the concrete model".into(),
                ));
            }
            commands::kernel(&ctx, doc, *order, out)
        }
        Command::Verify(_) => commands::verify::<S>(&ctx, doc, out),
        Command::Darboux(DarbouxCommand::Elementary(_)) => {
            commands::elementary::<S>(&ctx, doc, out)
        }
        Command::Darboux(DarbouxCommand::Factorize(_)) => commands::factorize::<S>(&ctx, doc, out),
        Command::Darboux(DarbouxCommand::Dress {
            n,
            r,
            mu,
            sturm_liouville,
            compat,
        }) => commands::dress(
            *n,
            *r,
            DressOptions {
                mu: *mu,
                sturm_liouville: *sturm_liouville,
                compat: *compat,
            },
            out,
        ),
    }
}
