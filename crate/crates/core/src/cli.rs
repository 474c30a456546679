//! The `betw` command line.
//!
//! Exit status: 0 affirmative, 1 negative (UNSAT, countermodel, rejected
//! proof, violation), 2 usage or input error. Reports go to standard output,
//! diagnostics to standard error; `--json` switches the report to JSON.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::decision::{
    self, DecisionConfig, SweepConfig, Verdict, DEFAULT_MAX_UNIVERSE,
};
use crate::fuzz::{self, FuzzConfig, Mutant};
use crate::graph::Graph;
use crate::kernel::{self, load_proof, ProofChecker};
use crate::par::default_workers;
use crate::parser::parse_formula;
use crate::semantics::{eval_formula, Semantics};
use crate::syntax::{Formula, Signature};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "betw", version, about = "Betweenness logic over finite graphs")]
pub struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Model-check formulas against a graph file.
    Check(CheckArgs),
    /// Decide validity over all graphs on a universe.
    Valid(DecideArgs),
    /// Decide entailment; the last formula is the goal, earlier ones are hypotheses.
    Entails(DecideArgs),
    /// Verify a JSON proof file.
    ProveCheck(ProveArgs),
    /// Axiom schema utilities.
    Axioms {
        #[command(subcommand)]
        command: AxiomsCommand,
    },
    /// Randomized soundness and oracle checks.
    Fuzz(FuzzArgs),
}

#[derive(Debug, Subcommand)]
pub enum AxiomsCommand {
    /// Check every schema instance against every graph.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct FormulaArgs {
    /// Formula text (repeatable).
    #[arg(long = "formula", value_name = "FORMULA")]
    pub flagged: Vec<String>,
    /// File with one formula per line.
    #[arg(long, value_name = "PATH")]
    pub file: Option<PathBuf>,
    /// Formulas given inline.
    #[arg(value_name = "FORMULA")]
    pub positional: Vec<String>,
}

#[derive(Debug, Args)]
pub struct EngineArgs {
    /// Use non-strict betweenness (path endpoints may lie in the middle set).
    #[arg(long)]
    pub nonstrict: bool,
    /// Worker threads; defaults to available parallelism.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Largest universe to enumerate (hard ceiling 7).
    #[arg(long, default_value_t = DEFAULT_MAX_UNIVERSE)]
    pub max_universe: usize,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, value_name = "PATH")]
    pub graph: PathBuf,
    /// Vertex universe; must name the graph's vertices.
    #[arg(long)]
    pub universe: Option<String>,
    #[arg(long)]
    pub nonstrict: bool,
    #[command(flatten)]
    pub formulas: FormulaArgs,
}

#[derive(Debug, Args)]
pub struct DecideArgs {
    /// Vertex universe, e.g. `a,b,c` or `a..e`.
    #[arg(long)]
    pub universe: String,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[command(flatten)]
    pub formulas: FormulaArgs,
}

#[derive(Debug, Args)]
pub struct ProveArgs {
    /// Proof file.
    #[arg(value_name = "PROOF", required_unless_present = "file")]
    pub path: Option<PathBuf>,
    #[arg(long, value_name = "PATH", conflicts_with = "path")]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub universe: String,
    #[command(flatten)]
    pub engine: EngineArgs,
    /// Seed for sampled sweeps over universes larger than 3.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Substitutions sampled per schema when the sweep is not exhaustive.
    #[arg(long, default_value_t = 32)]
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MutantArg {
    /// Transitivity without the `d ∉ B` side condition.
    UnguardedTransitivity,
}

#[derive(Debug, Args)]
pub struct FuzzArgs {
    #[arg(long)]
    pub universe: String,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub iters: u64,
    /// Replace a schema with an unsound variant.
    #[arg(long, value_enum, hide = true)]
    pub mutant: Option<MutantArg>,
}

/// A finished report: text, its JSON mirror, and the exit status.
struct Report {
    text: String,
    json: Value,
    code: i32,
}

#[derive(Debug)]
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type CmdResult = Result<Report, InputError>;

/// Parses a universe: comma- or whitespace-separated names, or a single
/// letter range such as `a..h`.
pub fn parse_universe(spec: &str) -> Result<Signature, String> {
    let spec = spec.trim();
    if let Some((lo, hi)) = spec.split_once("..") {
        let (lo, hi) = (lo.trim(), hi.trim());
        let (Some(l), Some(h)) = (single_letter(lo), single_letter(hi)) else {
            return Err(format!("invalid universe range `{spec}`"));
        };
        if l > h {
            return Err(format!("empty universe range `{spec}`"));
        }
        return Signature::new((l..=h).map(|c| c.to_string())).map_err(|e| e.to_string());
    }
    let names = spec
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty());
    Signature::new(names).map_err(|e| e.to_string())
}

fn single_letter(s: &str) -> Option<char> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) if c.is_ascii_alphabetic() => Some(c),
        _ => None,
    }
}

fn mode_of(nonstrict: bool) -> Semantics {
    if nonstrict {
        Semantics::NonStrict
    } else {
        Semantics::Strict
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn collect_formulas(args: &FormulaArgs, sig: &Signature) -> Result<Vec<Formula>, InputError> {
    let mut texts: Vec<String> = args.flagged.clone();
    texts.extend(args.positional.iter().cloned());
    if let Some(path) = &args.file {
        let content = read(path)?;
        texts.extend(
            content
                .lines()
                .filter(|l| !l.split('#').next().unwrap_or("").trim().is_empty())
                .map(str::to_string),
        );
    }
    if texts.is_empty() {
        return Err(InputError("no formulas given".into()));
    }
    texts
        .iter()
        .map(|t| parse_formula(t, sig).map_err(|e| InputError(format!("`{t}`: {e}"))))
        .collect()
}

fn decision_config(engine: &EngineArgs) -> DecisionConfig {
    DecisionConfig {
        max_universe: engine.max_universe,
        workers: engine.workers.unwrap_or_else(default_workers),
    }
}

fn graph_json(g: &Graph) -> Value {
    let sig = g.signature();
    json!({
        "vertices": sig.names(),
        "edges": g.edges().into_iter()
            .map(|(u, v)| [sig.name(u), sig.name(v)])
            .collect::<Vec<_>>(),
    })
}

/// Re-indexes `g` onto `sig`, which must name the same vertices.
fn reindex(g: &Graph, sig: Signature) -> Result<Graph, InputError> {
    let mut old: Vec<&String> = g.signature().names().iter().collect();
    let mut new: Vec<&String> = sig.names().iter().collect();
    old.sort();
    new.sort();
    if old != new {
        return Err(InputError(format!(
            "--universe {} conflicts with the graph's vertices {}",
            sig.names().join(","),
            g.signature().names().join(",")
        )));
    }
    let map = |v: usize| sig.vertex(g.signature().name(v)).expect("same names");
    let edges: Vec<_> = g.edges().into_iter().map(|(u, v)| (map(u), map(v))).collect();
    Ok(Graph::from_edges(Arc::new(sig), edges)?)
}

fn cmd_check(args: &CheckArgs) -> CmdResult {
    let mut graph = Graph::parse(&read(&args.graph)?)?;
    if let Some(u) = &args.universe {
        graph = reindex(&graph, parse_universe(u)?)?;
    }
    let sig = graph.signature().clone();
    let mode = mode_of(args.nonstrict);
    let formulas = collect_formulas(&args.formulas, &sig)?;
    let mut text = String::new();
    let mut results = Vec::new();
    let mut all_sat = true;
    for f in &formulas {
        let sat = eval_formula(&graph, f, mode)?;
        all_sat &= sat;
        let rendered = f.render(&sig);
        writeln!(text, "{} {rendered}", if sat { "SAT" } else { "UNSAT" }).ok();
        results.push(json!({ "formula": rendered, "satisfied": sat }));
    }
    Ok(Report {
        text,
        json: json!({ "command": "check", "mode": mode.name(), "results": results }),
        code: if all_sat { EXIT_OK } else { EXIT_NEGATIVE },
    })
}

fn verdict_report(verdict: &Verdict, text: &mut String) -> Value {
    match verdict {
        Verdict::Valid => {
            text.push_str("VALID\n");
            json!({ "verdict": "valid" })
        }
        Verdict::Countermodel(g) => {
            text.push_str("COUNTERMODEL\n");
            text.push_str(&g.to_string());
            json!({ "verdict": "countermodel", "countermodel": graph_json(g) })
        }
    }
}

fn cmd_valid(args: &DecideArgs) -> CmdResult {
    let sig = Arc::new(parse_universe(&args.universe)?);
    let mode = mode_of(args.engine.nonstrict);
    let config = decision_config(&args.engine);
    let formulas = collect_formulas(&args.formulas, &sig)?;
    let mut text = String::new();
    let mut results = Vec::new();
    let mut all_valid = true;
    for f in &formulas {
        let verdict = decision::check_validity(f, sig.clone(), mode, &config)?;
        all_valid &= verdict.is_valid();
        let rendered = f.render(&sig);
        writeln!(text, "# {rendered}").ok();
        let mut entry = verdict_report(&verdict, &mut text);
        entry["formula"] = json!(rendered);
        results.push(entry);
    }
    Ok(Report {
        text,
        json: json!({
            "command": "valid",
            "mode": mode.name(),
            "universe": sig.names(),
            "results": results,
        }),
        code: if all_valid { EXIT_OK } else { EXIT_NEGATIVE },
    })
}

fn cmd_entails(args: &DecideArgs) -> CmdResult {
    let sig = Arc::new(parse_universe(&args.universe)?);
    let mode = mode_of(args.engine.nonstrict);
    let config = decision_config(&args.engine);
    let mut formulas = collect_formulas(&args.formulas, &sig)?;
    let goal = formulas.pop().expect("at least one formula");
    let verdict = decision::entails(&formulas, &goal, sig.clone(), mode, &config)?;
    let mut text = String::new();
    for h in &formulas {
        writeln!(text, "# hypothesis {}", h.render(&sig)).ok();
    }
    writeln!(text, "# goal {}", goal.render(&sig)).ok();
    let mut json = verdict_report(&verdict, &mut text);
    json["command"] = json!("entails");
    json["mode"] = json!(mode.name());
    json["universe"] = json!(sig.names());
    json["hypotheses"] = json!(formulas.iter().map(|h| h.render(&sig)).collect::<Vec<_>>());
    json["goal"] = json!(goal.render(&sig));
    Ok(Report {
        text,
        json,
        code: if verdict.is_valid() { EXIT_OK } else { EXIT_NEGATIVE },
    })
}

fn cmd_prove_check(args: &ProveArgs) -> CmdResult {
    let path = args.path.as_ref().or(args.file.as_ref()).expect("clap requires one");
    let proof = load_proof(&read(path)?)?;
    let verdict = ProofChecker::default().check(&proof);
    let sig = &proof.sig;
    Ok(match verdict {
        kernel::Verdict::Accepted => {
            let conclusion = proof.conclusion().expect("accepted proofs are non-empty").render(sig);
            Report {
                text: format!("ACCEPTED {} lines\nconclusion: {conclusion}\n", proof.lines.len()),
                json: json!({
                    "command": "prove-check",
                    "verdict": "accepted",
                    "lines": proof.lines.len(),
                    "conclusion": conclusion,
                }),
                code: EXIT_OK,
            }
        }
        kernel::Verdict::Rejected { line, reason } => Report {
            text: format!("REJECTED line {line}: {reason}\n"),
            json: json!({
                "command": "prove-check",
                "verdict": "rejected",
                "line": line,
                "reason": reason.code(),
                "detail": reason,
            }),
            code: EXIT_NEGATIVE,
        },
    })
}

fn cmd_sweep(args: &SweepArgs) -> CmdResult {
    let sig = Arc::new(parse_universe(&args.universe)?);
    let mode = mode_of(args.engine.nonstrict);
    let config = SweepConfig {
        decision: decision_config(&args.engine),
        samples: args.samples,
        seed: args.seed,
    };
    let report = decision::schema_validity_sweep(sig.clone(), mode, &config)?;
    let mut text = format!(
        "sweep universe={} mode={} exhaustive={}\n",
        sig.names().join(","),
        mode.name(),
        report.exhaustive
    );
    let mut rows = Vec::new();
    for s in &report.schemas {
        write!(
            text,
            "{} instances={} graphs={} {}",
            s.schema,
            s.instances,
            s.graphs,
            if s.passed() { "PASS" } else { "FAIL" }
        )
        .ok();
        let mut row = json!({
            "schema": s.schema.name(),
            "instances": s.instances,
            "graphs": s.graphs,
            "failures": s.failures,
            "status": if s.passed() { "PASS" } else { "FAIL" },
        });
        if let Some(first) = &s.first_failure {
            write!(
                text,
                " failures={} first: edges=[{}] subst=[{}]",
                s.failures,
                first.graph.render_edges(),
                first.substitution.render(&sig)
            )
            .ok();
            row["first_failure"] = json!({
                "graph": graph_json(&first.graph),
                "substitution": first.substitution.to_names(&sig),
            });
        }
        text.push('\n');
        rows.push(row);
    }
    Ok(Report {
        text,
        json: json!({
            "command": "axioms sweep",
            "mode": mode.name(),
            "universe": sig.names(),
            "exhaustive": report.exhaustive,
            "schemas": rows,
        }),
        code: if report.passed() { EXIT_OK } else { EXIT_NEGATIVE },
    })
}

/// Violations listed individually in a fuzz report.
const MAX_LISTED_VIOLATIONS: usize = 20;

fn cmd_fuzz(args: &FuzzArgs) -> CmdResult {
    let sig = Arc::new(parse_universe(&args.universe)?);
    let mode = mode_of(args.engine.nonstrict);
    let config = FuzzConfig {
        seed: args.seed,
        iterations: args.iters,
        mode,
        decision: decision_config(&args.engine),
        mutant: args.mutant.map(|MutantArg::UnguardedTransitivity| Mutant::UnguardedTransitivity),
    };
    let report = fuzz::fuzz(sig.clone(), &config)?;
    let mut text = format!(
        "fuzz universe={} mode={} seed={} iterations={}\nschema checks: {}\noracle checks: {}\nviolations: {}\n",
        sig.names().join(","),
        mode.name(),
        report.seed,
        report.iterations,
        report.schema_checks,
        report.oracle_checks,
        report.violations.len()
    );
    let listed: Vec<String> = report
        .violations
        .iter()
        .take(MAX_LISTED_VIOLATIONS)
        .map(|v| v.describe(&sig))
        .collect();
    for line in &listed {
        writeln!(text, "{line}").ok();
    }
    if report.violations.len() > MAX_LISTED_VIOLATIONS {
        writeln!(
            text,
            "... {} more",
            report.violations.len() - MAX_LISTED_VIOLATIONS
        )
        .ok();
    }
    Ok(Report {
        text,
        json: json!({
            "command": "fuzz",
            "mode": mode.name(),
            "universe": sig.names(),
            "seed": report.seed,
            "iterations": report.iterations,
            "schema_checks": report.schema_checks,
            "oracle_checks": report.oracle_checks,
            "violation_count": report.violations.len(),
            "violations": listed,
        }),
        code: if report.passed() { EXIT_OK } else { EXIT_NEGATIVE },
    })
}

fn dispatch(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Check(a) => cmd_check(a),
        Command::Valid(a) => cmd_valid(a),
        Command::Entails(a) => cmd_entails(a),
        Command::ProveCheck(a) => cmd_prove_check(a),
        Command::Axioms {
            command: AxiomsCommand::Sweep(a),
        } => cmd_sweep(a),
        Command::Fuzz(a) => cmd_fuzz(a),
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            write!(sink, "{}", e.render()).ok();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(report) => {
            if cli.json {
                writeln!(out, "{}", report.json).ok();
            } else {
                write!(out, "{}", report.text).ok();
            }
            report.code
        }
        Err(InputError(message)) => {
            writeln!(err, "error: {message}").ok();
            EXIT_ERROR
        }
    }
}
