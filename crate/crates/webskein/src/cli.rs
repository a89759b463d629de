//! Command definitions and the runner behind the `webskein` binary.
//!
//! Exit codes: 0 success, 1 a check failed, 2 unreadable or malformed input,
//! 3 a diagram that is not closed or does not compose, 4 any other error.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use webskein_core::affine::{annular_eval_in, EvalParams};
use webskein_core::braiding::{smooth_crossing, Sign};
use webskein_core::ladder::{eval_matrix_in, evaluate_in, DiagramKind, EvalResult, LadderDiagram};
use webskein_core::moyreduce::{crosscheck_in, CrossCheck};
use webskein_core::repcore::{BlockOperator, RepSpace};
use webskein_core::Error;

use crate::format::{parse_diagram, warnings};
use crate::verify::{render_word, run_suite, Grid, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_BOUNDARY: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "webskein", version, about = "Exact sl_n web and link invariants from ladder diagrams")]
pub struct Args {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Params {
    #[default]
    Generic,
    Filled,
}

impl From<Params> for EvalParams {
    fn from(p: Params) -> Self {
        match p {
            Params::Generic => EvalParams::Generic,
            Params::Filled => EvalParams::Filled,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    match s {
        "+" | "pos" | "+1" => Ok(Sign::Pos),
        "-" | "neg" | "-1" => Ok(Sign::Neg),
        _ => Err(format!("sign must be + or -, found `{}`", s)),
    }
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Evaluate a diagram: a scalar if closed, otherwise its block matrices.
    Eval {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Params::Generic)]
        params: Params,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Print the block matrices of a diagram.
    Matrix {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Params::Generic)]
        params: Params,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// List the rung-word terms of a crossing of a k-strand and an l-strand.
    Smooth {
        n: u32,
        k: u32,
        l: u32,
        #[arg(value_parser = parse_sign, allow_hyphen_values = true)]
        sign: Sign,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Compare the matrix value of a closed diagram with the web-relation reducer.
    Crosscheck {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Run a relation suite.
    Verify {
        suite: Suite,
        #[arg(long = "max-m", default_value_t = 4)]
        max_m: usize,
        #[arg(long = "max-N", default_value_t = 4)]
        max_total: i32,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn error(code: i32, msg: String) -> Self {
        Output { code, stdout: String::new(), stderr: msg + "\n" }
    }
}

fn from_core(e: Error) -> Output {
    let code = match e {
        Error::NotClosed | Error::BoundaryMismatch(_) => EXIT_BOUNDARY,
        Error::Parse(_) => EXIT_PARSE,
        _ => EXIT_INTERNAL,
    };
    Output::error(code, format!("error: {}", e))
}

fn load(file: &PathBuf) -> Result<(LadderDiagram, String), Output> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Output::error(EXIT_PARSE, format!("error: cannot read {}: {}", file.display(), e)))?;
    let d = parse_diagram(&text).map_err(|e| Output::error(EXIT_PARSE, format!("parse error: {}", e)))?;
    let mut notes = String::new();
    for w in warnings(&d) {
        writeln!(notes, "warning: {}", w).unwrap();
    }
    Ok((d, notes))
}

fn operator_text(op: &BlockOperator) -> String {
    let mut out = String::new();
    if op.is_zero() {
        out.push_str("0\n");
    }
    for ((s, t), mat) in &op.blocks {
        writeln!(out, "block {} -> {} [{}x{}]", s, t, mat.rows, mat.cols).unwrap();
        for (r, c, x) in mat.entries() {
            writeln!(out, "  [{},{}] {}", r, c, x).unwrap();
        }
    }
    out
}

fn operator_json(op: &BlockOperator) -> serde_json::Value {
    let blocks: Vec<_> = op
        .blocks
        .iter()
        .map(|((s, t), mat)| {
            let entries: Vec<_> =
                mat.entries().map(|(r, c, x)| json!({"row": r, "col": c, "value": x.to_string()})).collect();
            json!({
                "source": s.entries,
                "target": t.entries,
                "rows": mat.rows,
                "cols": mat.cols,
                "entries": entries,
            })
        })
        .collect();
    json!({"kind": "operator", "blocks": blocks})
}

fn evaluate(d: &LadderDiagram, params: Params) -> Result<EvalResult, Error> {
    let space = RepSpace::new(d.n, d.m)?;
    match d.kind {
        DiagramKind::Annular => annular_eval_in(&space, d, params.into()),
        DiagramKind::Linear => evaluate_in(&space, d),
    }
}

fn render_result(r: &EvalResult, format: OutputFormat) -> String {
    match (r, format) {
        (EvalResult::Scalar(x), OutputFormat::Text) => format!("{}\n", x),
        (EvalResult::Scalar(x), OutputFormat::Json) => format!("{}\n", json!({"kind": "scalar", "value": x.to_string()})),
        (EvalResult::Operator(op), OutputFormat::Text) => operator_text(op),
        (EvalResult::Operator(op), OutputFormat::Json) => format!("{}\n", operator_json(op)),
    }
}

pub fn run(cmd: &Command) -> Output {
    match run_inner(cmd) {
        Ok(o) | Err(o) => o,
    }
}

fn run_inner(cmd: &Command) -> Result<Output, Output> {
    Ok(match cmd {
        Command::Eval { file, params, format } => {
            let (d, notes) = load(file)?;
            let r = evaluate(&d, *params).map_err(from_core)?;
            Output { stderr: notes, ..Output::ok(render_result(&r, *format)) }
        }
        Command::Matrix { file, params, format } => {
            let (d, notes) = load(file)?;
            let op = match d.kind {
                DiagramKind::Linear => {
                    let space = RepSpace::new(d.n, d.m).map_err(from_core)?;
                    eval_matrix_in(&space, &d).map_err(from_core)?
                }
                DiagramKind::Annular => match evaluate(&d, *params).map_err(from_core)? {
                    EvalResult::Operator(op) => op,
                    EvalResult::Scalar(x) => {
                        let tgt = d.target().seq().cloned().unwrap_or_else(|| d.source.clone());
                        BlockOperator::single(
                            d.source.clone(),
                            tgt,
                            webskein_core::repcore::SparseMatrix::identity(1).scale(&x),
                        )
                    }
                },
            };
            Output { stderr: notes, ..Output::ok(render_result(&EvalResult::Operator(op), *format)) }
        }
        Command::Smooth { n, k, l, sign, format } => {
            if k > n || l > n {
                return Err(Output::error(EXIT_INTERNAL, format!("error: labels {} and {} must not exceed n={}", k, l, n)));
            }
            let terms = smooth_crossing(*n, *k, *l, *sign);
            let out = match format {
                OutputFormat::Text => {
                    let mut s = String::new();
                    for t in &terms {
                        let (a, b, c) = t.abc;
                        writeln!(s, "({},{},{}) {}", a, b, c, t.coeff).unwrap();
                    }
                    s
                }
                OutputFormat::Json => {
                    let v: Vec<_> = terms
                        .iter()
                        .map(|t| json!({"a": t.abc.0, "b": t.abc.1, "c": t.abc.2, "coeff": t.coeff.to_string()}))
                        .collect();
                    format!("{}\n", json!({"terms": v}))
                }
            };
            Output::ok(out)
        }
        Command::Crosscheck { file, format } => {
            let (d, notes) = load(file)?;
            if d.kind == DiagramKind::Annular {
                return Err(Output::error(EXIT_INTERNAL, "error: crosscheck takes linear diagrams".into()));
            }
            let space = RepSpace::new(d.n, d.m).map_err(from_core)?;
            let r = crosscheck_in(&space, &d).map_err(from_core)?;
            let (code, text, value) = match &r {
                CrossCheck::Agree(x) => (EXIT_OK, format!("AGREE {}\n", x), json!({"result": "AGREE", "value": x.to_string()})),
                CrossCheck::Disagree { matrix, reduced } => (
                    EXIT_FAIL,
                    format!("DISAGREE matrix={} reduced={}\n", matrix, reduced),
                    json!({"result": "DISAGREE", "matrix": matrix.to_string(), "reduced": reduced.to_string()}),
                ),
                CrossCheck::Partial { matrix, stuck } => {
                    let words: Vec<String> = stuck.iter().map(|w| format!("{} on {}", render_word(&w.items), w.source)).collect();
                    let mut t = format!("PARTIAL matrix={} stuck={}\n", matrix, stuck.len());
                    for w in words.iter().take(5) {
                        writeln!(t, "  {}", w).unwrap();
                    }
                    (EXIT_OK, t, json!({"result": "PARTIAL", "matrix": matrix.to_string(), "stuck": words}))
                }
            };
            let stdout = match format {
                OutputFormat::Text => text,
                OutputFormat::Json => format!("{}\n", value),
            };
            Output { code, stdout, stderr: notes }
        }
        Command::Verify { suite, max_m, max_total, format } => {
            let grid = Grid { max_m: *max_m, max_total: *max_total };
            let report = run_suite(*suite, grid).map_err(from_core)?;
            let stdout = match format {
                OutputFormat::Text => report.to_text(),
                OutputFormat::Json => format!("{}\n", report.to_json()),
            };
            let code = if report.passed() { EXIT_OK } else { EXIT_FAIL };
            Output { code, stdout, stderr: String::new() }
        }
    })
}
