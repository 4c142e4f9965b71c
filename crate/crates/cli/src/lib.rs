//! The `futs` command-line tool. [`run`] is the whole program; `main` only
//! wires it to the process streams.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use futs::bisim::{BisimError, DEFAULT_BRUTE_FORCE_CAP};
use futs::encodings::{brute_force_concrete_coarsest, Model, ModelError};
use futs::model_io::{
    parse_model, parse_relation, serialize_futs, serialize_model, serialize_partition, write_continuation,
    ModelDocument, ModelKind, ParseError, RelationError,
};
use futs::partition::all_partitions;
use futs::quotient::QuotientError;
use futs::testkit::{random_model, BadParams, GenParams};
use futs::{
    bisimilar, brute_force_coarsest, coarsest_bisimulation, find_violation, quotient_futs, Futs, Key, Partition,
};

#[derive(Debug, Parser)]
#[command(name = "futs", version, about = "Bisimulation checking and minimisation for quantitative models")]
pub struct Cli {
    /// Print nothing; report through the exit code only.
    #[arg(long, global = true)]
    pub quiet: bool,
    /// Emit one JSON object instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for generator commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest state count for exhaustive enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_BRUTE_FORCE_CAP)]
    pub max_brute: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coarsest bisimulation and the quotient system.
    Minimize { file: PathBuf },
    /// Whether two states are bisimilar.
    Equiv { file: PathBuf, left: String, right: String },
    /// Whether a relation is a bisimulation; prints a witness if not.
    Check {
        file: PathBuf,
        #[arg(long)]
        relation: PathBuf,
    },
    /// Coarsest bisimulation by exhaustive enumeration.
    Oracle { file: PathBuf },
    /// Compares the model's own bisimulation with the FuTS one.
    Crosscheck { file: PathBuf },
    /// Prints a random model.
    Gen {
        kind: ModelKind,
        #[arg(long, default_value_t = 4)]
        states: usize,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{source}")]
    Parse { path: String, source: Box<ParseError> },
    #[error("{path}:{source}")]
    Relation { path: String, source: RelationError },
    #[error("{path}: {source}")]
    Model { path: String, source: ModelError },
    #[error(transparent)]
    Bisim(#[from] BisimError),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error(transparent)]
    Gen(#[from] BadParams),
}

/// Result of one command: what to print and the exit code.
struct Report {
    text: String,
    json: Value,
    code: i32,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { text, json, code: 0 }
    }
}

/// Runs the tool on `args` (including the program name) and returns the
/// exit code: 0 success, 1 negative verdict, 2 usage or input error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            if !cli.quiet {
                let _ = if cli.json { writeln!(out, "{}", report.json) } else { out.write_all(report.text.as_bytes()) };
            }
            report.code
        }
        Err(e) => {
            let _ = writeln!(err, "futs: {e}");
            2
        }
    }
}

fn load(path: &Path) -> Result<ModelDocument, CliError> {
    let shown = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: shown.clone(), source })?;
    parse_model(&text).map_err(|source| CliError::Parse { path: shown, source: Box::new(source) })
}

fn encode(path: &Path, doc: &ModelDocument) -> Result<Futs, CliError> {
    doc.model.encode().map_err(|source| CliError::Model { path: path.display().to_string(), source })
}

fn blocks_json(p: &Partition, names: &[String]) -> Value {
    p.blocks().iter().map(|b| b.iter().map(|&i| names[i].clone()).collect::<Vec<_>>()).collect()
}

fn execute(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Minimize { file } => {
            let doc = load(file)?;
            let futs = encode(file, &doc)?;
            let p = coarsest_bisimulation(&futs, None)?;
            let q = quotient_futs(&futs, &p)?;
            let names = futs.state_names();
            let quotient = serialize_futs(&q.futs, &[]);
            let text = format!("{}# quotient\n{}", serialize_partition(&p, names), quotient);
            let json = json!({ "command": "minimize", "partition": blocks_json(&p, names), "quotient": quotient });
            Ok(Report::ok(text, json))
        }
        Command::Equiv { file, left, right } => {
            let doc = load(file)?;
            let futs = encode(file, &doc)?;
            let same = bisimilar(&futs, left, right)?;
            let verdict = if same { "bisimilar" } else { "not-bisimilar" };
            Ok(Report {
                text: format!("{verdict}\n"),
                json: json!({ "command": "equiv", "left": left, "right": right, "bisimilar": same }),
                code: if same { 0 } else { 1 },
            })
        }
        Command::Check { file, relation } => {
            let doc = load(file)?;
            let futs = encode(file, &doc)?;
            let shown = relation.display().to_string();
            let text = fs::read_to_string(relation).map_err(|source| CliError::Io { path: shown.clone(), source })?;
            let r = parse_relation(&text, futs.state_names())
                .map_err(|source| CliError::Relation { path: shown, source })?;
            check(&futs, &r)
        }
        Command::Oracle { file } => {
            let doc = load(file)?;
            let futs = encode(file, &doc)?;
            let p = brute_force_coarsest(&futs, cli.max_brute)?;
            let names = futs.state_names();
            Ok(Report::ok(
                serialize_partition(&p, names),
                json!({ "command": "oracle", "partition": blocks_json(&p, names) }),
            ))
        }
        Command::Crosscheck { file } => {
            let doc = load(file)?;
            let futs = encode(file, &doc)?;
            crosscheck(file, &doc, &futs, cli.max_brute)
        }
        Command::Gen { kind, states, density } => {
            let doc = random_model(*kind, cli.seed, &GenParams::new(*states, *density))?;
            let text = serialize_model(&doc);
            let json = json!({ "command": "gen", "kind": kind.keyword(), "seed": cli.seed, "model": text });
            Ok(Report::ok(text, json))
        }
    }
}

fn render_key(key: &Key, futs: &Futs) -> String {
    match key {
        Key::State(s) => futs.state_name(*s).to_string(),
        Key::Cont(id) => write_continuation(futs.registry().resolve(*id), futs.registry(), futs.state_names()),
    }
}

fn check(futs: &Futs, r: &Partition) -> Result<Report, CliError> {
    let Some(v) = find_violation(futs, r)? else {
        return Ok(Report::ok("bisimulation\n".into(), json!({ "command": "check", "bisimulation": true })));
    };
    let left = futs.state_name(v.left);
    let right = futs.state_name(v.right);
    let label = &futs.futs_type().components[v.component].labels[v.label];
    let class: Vec<String> = v.class.iter().map(|k| render_key(k, futs)).collect();
    let text = format!(
        "not-a-bisimulation\nwitness: {left} {right}\ncomponent: {}\nlabel: {label}\nclass: {{{}}}\nvalues: {} {}\n",
        v.component + 1,
        class.join(" "),
        v.left_value,
        v.right_value,
    );
    let json = json!({
        "command": "check",
        "bisimulation": false,
        "witness": {
            "left": left,
            "right": right,
            "component": v.component + 1,
            "label": label,
            "class": class,
            "left_value": v.left_value.to_string(),
            "right_value": v.right_value.to_string(),
        },
    });
    Ok(Report { text, json, code: 1 })
}

fn crosscheck(file: &Path, doc: &ModelDocument, futs: &Futs, cap: usize) -> Result<Report, CliError> {
    let model_err = |source| CliError::Model { path: file.display().to_string(), source };
    let names = futs.state_names();
    let n = names.len();
    let coarsest = coarsest_bisimulation(futs, None)?;
    let mut coarsest_agrees = futs::is_bisimulation(futs, &coarsest)?;
    let concrete = !matches!(doc.model, Model::Futs(_));
    if concrete {
        coarsest_agrees &= doc.model.is_concrete_bisimulation(&coarsest).map_err(model_err)? == Some(true);
    }
    let mut checked = None;
    let mut discrepancies = 0usize;
    if n <= cap {
        let oracle = if concrete {
            brute_force_concrete_coarsest(&doc.model, cap).map_err(model_err)?
        } else {
            Some(brute_force_coarsest(futs, cap)?)
        };
        coarsest_agrees &= oracle.as_ref() == Some(&coarsest);
        if concrete {
            let mut count = 0usize;
            for r in all_partitions(n) {
                count += 1;
                let mine = doc.model.is_concrete_bisimulation(&r).map_err(model_err)?;
                if mine != Some(futs::is_bisimulation(futs, &r)?) {
                    discrepancies += 1;
                }
            }
            checked = Some(count);
        }
    }
    let agree = coarsest_agrees && discrepancies == 0;
    let relations = match checked {
        Some(count) => format!("relations: {count} checked, {discrepancies} discrepancies\n"),
        None if !concrete => "relations: no concrete checker for futs models\n".to_string(),
        None => format!("relations: skipped ({n} states > {cap})\n"),
    };
    let text = format!(
        "kind: {}\ncoarsest: {}\n{relations}{}\n",
        doc.kind,
        if coarsest_agrees { "agree" } else { "disagree" },
        if agree { "agree" } else { "disagree" },
    );
    let json = json!({
        "command": "crosscheck",
        "kind": doc.kind.keyword(),
        "coarsest": blocks_json(&coarsest, names),
        "coarsest_agrees": coarsest_agrees,
        "relations_checked": checked,
        "discrepancies": discrepancies,
        "agree": agree,
    });
    Ok(Report { text, json, code: if agree { 0 } else { 1 } })
}
