//! The `aci` command line: parses arguments, runs one analysis and renders
//! a report. Exit codes: 0 success, 1 refusal, 2 input error.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::aci_core::{shape_of, AciMatrix};
use crate::constant_rank::canonical_form;
use crate::decomposition::{enumerate_sets, wst_decompose, zero_block_witness, SetKind};
use crate::document::MatrixDocument;
use crate::error::{Error, RankWitnessPair};
use crate::rank_engine::{
    completion_count, is_fcmr, is_fmr, is_frmr, rank_report, rank_set_exhaustive, symbolic_rank,
    SearchBudget,
};
use crate::report::{
    canonical_json, lattice_json, rank_json, witness_pair_json, wst_json, zero_block_json, Report,
};
use crate::scalars::FieldSpec;

#[derive(Debug, Parser)]
#[command(name = "aci", about = "Rank analysis of ACI-matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Matrix file in `.aci` format, or `-` for standard input.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Reinterpret the entries over this field: gf(p) or rational.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Completion budget for exhaustive searches.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Random witness attempts.
    #[arg(long, global = true)]
    pub tries: Option<u32>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a matrix.
    Validate,
    /// Rank set, maxRank and minRank.
    Rank,
    /// WST-decomposition.
    Wst,
    /// All factor or semifactor sets.
    FactorSets {
        #[arg(long, default_value = "factor")]
        kind: SetKind,
    },
    /// Zero block certifying maxRank ≤ rho.
    ZeroBlock {
        #[arg(long)]
        rho: usize,
    },
    /// constantRank test and canonical form.
    ConstantRank,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Rank => "rank",
            Command::Wst => "wst",
            Command::FactorSets { .. } => "factor-sets",
            Command::ZeroBlock { .. } => "zero-block",
            Command::ConstantRank => "constant-rank",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs `aci` with `args` (including the program name) and `stdin` for
/// `--input -`.
pub fn run(args: &[String], stdin: impl FnOnce() -> std::io::Result<String>) -> Outcome {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let json_mode = cli.json;
    let name = cli.command.name();
    let emit = |code: i32, input_name: String, payload: Value, diagnostics: Vec<String>| {
        let stderr = if code == 2 {
            diagnostics
                .iter()
                .map(|d| format!("error: {d}\n"))
                .collect()
        } else {
            String::new()
        };
        let report = Report {
            command: name.to_string(),
            input_name,
            payload,
            diagnostics,
        };
        let stdout = if json_mode {
            report.to_json_string() + "\n"
        } else if code == 2 {
            String::new()
        } else {
            render_text(&report)
        };
        Outcome {
            code,
            stdout,
            stderr,
        }
    };
    let input_error = |input_name: String, msg: String| emit(2, input_name, Value::Null, vec![msg]);

    let Some(path) = cli.input.clone() else {
        return input_error(String::new(), "--input is required".into());
    };
    let (text, input_name) = if path.as_os_str() == "-" {
        match stdin() {
            Ok(t) => (t, "-".to_string()),
            Err(e) => return input_error("-".into(), format!("reading standard input: {e}")),
        }
    } else {
        let shown = path.display().to_string();
        match std::fs::read_to_string(&path) {
            Ok(t) => (t, shown),
            Err(e) => return input_error(shown.clone(), format!("{shown}: {e}")),
        }
    };
    let mut doc = match MatrixDocument::parse(&text) {
        Ok(d) => d,
        Err(e) => return input_error(input_name, e.to_string()),
    };
    let input_name = doc.name.clone().unwrap_or(input_name);
    if let Some(f) = &cli.field {
        match f.parse::<FieldSpec>() {
            Ok(f) => doc = doc.with_field(f),
            Err(e) => return input_error(input_name, e.to_string()),
        }
    }
    let m = match doc.to_matrix() {
        Ok(m) => m,
        Err(e) => return input_error(input_name, e.to_string()),
    };
    let defaults = SearchBudget::default();
    let budget = SearchBudget {
        max_completions: cli.budget.unwrap_or(defaults.max_completions),
        rng_seed: cli.seed.unwrap_or(defaults.rng_seed),
        random_tries: cli.tries.unwrap_or(defaults.random_tries),
        column_limit: defaults.column_limit,
    };
    match execute(&cli.command, &m, &budget) {
        Ok((code, payload, diagnostics)) => emit(code, input_name, payload, diagnostics),
        Err(e @ Error::IndexOutOfRange(_)) => input_error(input_name, e.to_string()),
        Err(e) => emit(1, input_name, Value::Null, vec![e.to_string()]),
    }
}

type Executed = (i32, Value, Vec<String>);

fn execute(cmd: &Command, m: &AciMatrix, budget: &SearchBudget) -> Result<Executed, Error> {
    match cmd {
        Command::Validate => Ok((0, validate_payload(m), Vec::new())),
        Command::Rank => {
            let r = rank_report(m, budget)?;
            let mut payload = rank_json(m, &r, symbolic_rank(m));
            payload["frmr"] = json!(is_frmr(m));
            payload["fcmr"] = json!(is_fcmr(m));
            payload["fmr"] = json!(is_fmr(m));
            Ok((0, payload, Vec::new()))
        }
        Command::Wst => {
            let d = wst_decompose(m, budget)?;
            Ok((0, wst_json(&d), Vec::new()))
        }
        Command::FactorSets { kind } => {
            let l = enumerate_sets(m, *kind, budget)?;
            let mut notes = Vec::new();
            if l.members.is_empty() {
                notes.push(if is_fmr(m) {
                    "matrix is FmR".to_string()
                } else {
                    "matrix is not FmR".to_string()
                });
            }
            Ok((0, lattice_json(&l), notes))
        }
        Command::ZeroBlock { rho } => match zero_block_witness(m, *rho, budget)? {
            Some(w) => Ok((0, zero_block_json(&w), Vec::new())),
            None => Ok((
                1,
                Value::Null,
                vec![format!("no zero block: maxRank exceeds {rho}")],
            )),
        },
        Command::ConstantRank => constant_rank_command(m, budget),
    }
}

fn validate_payload(m: &AciMatrix) -> Value {
    let vars: Vec<Value> = m
        .vars()
        .iter()
        .map(|v| json!({ "name": v.name, "column": v.owner_column + 1 }))
        .collect();
    json!({
        "dims": [m.rows(), m.cols()],
        "field": m.field().to_string(),
        "shape": shape_of(m).to_string(),
        "indeterminates": vars,
        "partial_matrix": m.is_partial_matrix(),
        "matrix": crate::report::matrix_json(m),
    })
}

fn constant_rank_command(m: &AciMatrix, budget: &SearchBudget) -> Result<Executed, Error> {
    let refuse = |pair: Option<RankWitnessPair>, note: String| {
        let payload = json!({
            "constant_rank": false,
            "rho": Value::Null,
            "form": Value::Null,
            "witness_pair": pair.as_ref().map(|p| witness_pair_json(m, p)),
        });
        Ok((1, payload, vec![note]))
    };
    let exhaustive = completion_count(m).is_some_and(|c| c <= budget.max_completions as u128);
    if exhaustive {
        let r = rank_set_exhaustive(m, budget)?;
        let lo = r.min_rank.expect("exhaustive");
        if lo < r.max_rank {
            let pair = RankWitnessPair {
                low: r.min_witness.clone().expect("exhaustive"),
                low_rank: lo,
                high: r.max_witness.clone().expect("exhaustive"),
                high_rank: r.max_rank,
            };
            return refuse(Some(pair), "matrix is not constantRank".into());
        }
    }
    match canonical_form(m, budget) {
        Ok(c) => {
            let mut notes = Vec::new();
            if c.outside_characterization {
                notes.push("rank 0: trivial form outside the characterization".to_string());
            }
            let payload = json!({
                "constant_rank": true,
                "rho": c.rho,
                "form": canonical_json(&c),
                "witness_pair": Value::Null,
            });
            Ok((0, payload, notes))
        }
        Err(Error::NotConstantRank(pair)) => {
            refuse(pair.map(|p| *p), "matrix is not constantRank".into())
        }
        Err(e @ Error::FieldTooSmall { .. }) if exhaustive => {
            let rho = rank_set_exhaustive(m, budget)?.max_rank;
            let payload = json!({
                "constant_rank": true,
                "rho": rho,
                "form": Value::Null,
                "witness_pair": Value::Null,
            });
            Ok((0, payload, vec![format!("no canonical form: {e}")]))
        }
        Err(e) => Err(e),
    }
}

fn render_text(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} ({})", r.command, r.input_name);
    render_value(&mut out, &r.payload, 1);
    for d in &r.diagnostics {
        let _ = writeln!(out, "note: {d}");
    }
    out
}

fn render_value(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                match v {
                    Value::Object(_) => {
                        if v.get("entries").is_some() {
                            let _ = writeln!(out, "{pad}{k}: {}", grid_text(v));
                        } else {
                            let _ = writeln!(out, "{pad}{k}:");
                            render_value(out, v, depth + 1);
                        }
                    }
                    _ => {
                        let _ = writeln!(out, "{pad}{k}: {}", scalar_text(v));
                    }
                }
            }
        }
        Value::Null => {}
        other => {
            let _ = writeln!(out, "{pad}{}", scalar_text(other));
        }
    }
}

fn grid_text(v: &Value) -> String {
    let dims = &v["dims"];
    let rows: Vec<String> = v["entries"]
        .as_array()
        .map(|rows| {
            rows.iter()
                .map(|r| {
                    let cells: Vec<&str> = r
                        .as_array()
                        .map(|c| c.iter().filter_map(Value::as_str).collect())
                        .unwrap_or_default();
                    format!("[{}]", cells.join(", "))
                })
                .collect()
        })
        .unwrap_or_default();
    format!("{}x{} {}", dims[0], dims[1], rows.join(" "))
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".to_string(),
        Value::Array(items) if items.iter().all(|i| !i.is_object()) => {
            let parts: Vec<String> = items.iter().map(scalar_text).collect();
            format!("[{}]", parts.join(", "))
        }
        other => other.to_string(),
    }
}
