//! Command-line driver. Exit codes: 0 success, 1 a check or suite failed,
//! 2 the invocation itself was wrong.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value as Json};

use crate::bound::Verdict;
use crate::check::{Checker, CheckerConfig, Diagnostic};
use crate::cost::CostModel;
use crate::eval::{trace_eval, EvalConfig, Mutation};
use crate::frontend::pretty::{pretty_program, show_nf, show_signature};
use crate::frontend::{elaborate_expr, load_file, parse_expr, FrontendError, Program};
use crate::harness::{audit, run_all, AuditConfig, SuiteConfig};
use crate::lattice::ExtNat;
use crate::syntax::{Context, Term};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const COST_MODEL_ENV: &str = "RBMLTT_COST_MODEL";

#[derive(Debug, Parser)]
#[command(name = "rbmltt", version, about = "Check, run and audit resource-bounded programs")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct GlobalOpts {
    /// Cost-model file of `key = value` lines; falls back to $RBMLTT_COST_MODEL.
    #[arg(long, global = true, value_name = "FILE")]
    pub cost_model: Option<PathBuf>,
    /// Ambient budget; exceeding it only warns.
    #[arg(long, global = true, value_name = "ELEM|inf")]
    pub budget: Option<ExtNat>,
    /// Range of sampled size values when dominance is not proved symbolically.
    #[arg(long, global = true, default_value_t = 32)]
    pub sample_range: u64,
    #[arg(long, global = true, default_value_t = 0x5eed)]
    pub seed: u64,
    /// Warnings count as failures.
    #[arg(long, global = true)]
    pub strict: bool,
    #[arg(long, global = true)]
    pub json: bool,
    /// Print the per-rule cost ledger.
    #[arg(long, global = true)]
    pub trace: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every declaration and print its signature with the synthesized bound.
    Check {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Evaluate a declaration applied to literal arguments.
    Run {
        path: PathBuf,
        entry: String,
        args: Vec<String>,
    },
    /// Compare measured cost with the declared bound on inputs of growing size.
    Audit {
        path: PathBuf,
        /// Comma-separated sizes or an inclusive range `a..b`.
        #[arg(long, default_value = "0..16")]
        sizes: String,
        /// Only this declaration.
        #[arg(long)]
        decl: Option<String>,
    },
    /// Run the property suites over a generated corpus.
    Metatheory {
        #[arg(long, default_value_t = 1000)]
        corpus_size: usize,
        #[arg(long, default_value_t = 300)]
        substitution_pairs: usize,
        /// Inject an evaluator fault.
        #[arg(long, hide = true)]
        mutation: Option<MutationArg>,
    },
    /// Print files in canonical form.
    Fmt {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MutationArg {
    UnaryAdd,
}

impl From<MutationArg> for Mutation {
    fn from(m: MutationArg) -> Mutation {
        match m {
            MutationArg::UnaryAdd => Mutation::UnaryAdd,
        }
    }
}

/// A failure to report, with the exit code it maps to.
struct Exit {
    code: i32,
    message: String,
}

impl Exit {
    fn usage(message: impl Into<String>) -> Exit {
        Exit {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn fail(message: impl Into<String>) -> Exit {
        Exit {
            code: EXIT_FAIL,
            message: message.into(),
        }
    }
}

/// Outcome of a subcommand: text and JSON renderings plus the exit code.
struct Output {
    text: String,
    json: Json,
    code: i32,
}

/// Parse arguments and run; returns the exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            if args.iter().any(|a| a == "--json") {
                let msg = e.kind().to_string();
                let _ = writeln!(out, "{}", json!({ "error": msg, "exit": EXIT_USAGE }));
            } else {
                let _ = write!(err, "{e}");
            }
            return EXIT_USAGE;
        }
    };
    run(&cli, out, err)
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let g = &cli.global;
    let result = base_cost(g).and_then(|cost| match &cli.command {
        Command::Check { paths } => cmd_check(g, cost, paths),
        Command::Run { path, entry, args } => cmd_run(g, cost, path, entry, args),
        Command::Audit { path, sizes, decl } => cmd_audit(g, cost, path, sizes, decl.as_deref()),
        Command::Metatheory {
            corpus_size,
            substitution_pairs,
            mutation,
        } => Ok(cmd_metatheory(g, cost, *corpus_size, *substitution_pairs, mutation.map(Into::into))),
        Command::Fmt { paths } => cmd_fmt(g, cost, paths),
    });
    match result {
        Ok(o) => {
            if g.json {
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&o.json).unwrap_or_default());
            } else if !o.text.is_empty() {
                let _ = write!(out, "{}", o.text);
            }
            o.code
        }
        Err(e) => {
            if g.json {
                let _ = writeln!(out, "{}", json!({ "error": e.message, "exit": e.code }));
            } else {
                let _ = writeln!(err, "rbmltt: {}", e.message);
            }
            e.code
        }
    }
}

fn base_cost(g: &GlobalOpts) -> Result<CostModel, Exit> {
    let path = g
        .cost_model
        .clone()
        .or_else(|| std::env::var_os(COST_MODEL_ENV).map(PathBuf::from));
    match path {
        Some(p) => CostModel::load(&p).map_err(|e| Exit::usage(e.to_string())),
        None => Ok(CostModel::default()),
    }
}

fn checker_config(g: &GlobalOpts, cost: CostModel) -> CheckerConfig {
    CheckerConfig {
        budget: g.budget.unwrap_or(ExtNat::Inf),
        sample_range: g.sample_range,
        strict: g.strict,
        ..CheckerConfig::with_cost(cost)
    }
}

fn load(path: &Path, cost: &CostModel) -> Result<Program, Exit> {
    if !path.exists() {
        return Err(Exit::usage(format!("no such file: {}", path.display())));
    }
    load_file(path, cost).map_err(|e| Exit::fail(e.to_string()))
}

#[derive(Debug, Serialize)]
struct DeclReport {
    name: String,
    signature: Option<String>,
    /// Normalized synthesized bound of the body under its leading binders.
    bound: Option<String>,
    verdict: Option<Verdict>,
    ok: bool,
    diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Serialize)]
struct FileReport {
    path: String,
    error: Option<String>,
    decls: Vec<DeclReport>,
}

fn check_program(program: &Program, cfg: &CheckerConfig) -> Vec<DeclReport> {
    program
        .decls
        .iter()
        .map(|d| {
            let mut c = Checker::new(cfg.clone());
            let names = d.leading_names();
            let r = c.check_decl(&d.ty, &d.body);
            let mut diagnostics: Vec<Diagnostic> = c
                .take_warnings()
                .into_iter()
                .map(|w| w.with_span(d.span.clone()).in_decl(&d.name))
                .collect();
            match r {
                Ok(dc) => {
                    let shown = if names.is_empty() { &dc.bound } else { &dc.latent };
                    DeclReport {
                        name: d.name.clone(),
                        signature: Some(show_signature(&d.ty, &d.ty_names, names.len(), Some(&dc.latent))),
                        bound: Some(show_nf(&shown.normalize(), &names)),
                        verdict: dc.verdict,
                        ok: true,
                        diagnostics,
                    }
                }
                Err(e) => {
                    diagnostics.push(e.with_span(d.span.clone()).in_decl(&d.name));
                    DeclReport {
                        name: d.name.clone(),
                        signature: Some(show_signature(&d.ty, &d.ty_names, names.len(), None)),
                        bound: None,
                        verdict: None,
                        ok: false,
                        diagnostics,
                    }
                }
            }
        })
        .collect()
}

fn cmd_check(g: &GlobalOpts, cost: CostModel, paths: &[PathBuf]) -> Result<Output, Exit> {
    if let Some(p) = paths.iter().find(|p| !p.exists()) {
        return Err(Exit::usage(format!("no such file: {}", p.display())));
    }
    let reports: Vec<FileReport> = paths
        .par_iter()
        .map(|path| match load_file(path, &cost) {
            Ok(program) => FileReport {
                path: path.display().to_string(),
                error: None,
                decls: check_program(&program, &checker_config(g, program.cost)),
            },
            Err(e) => FileReport {
                path: path.display().to_string(),
                error: Some(e.to_string()),
                decls: Vec::new(),
            },
        })
        .collect();
    let mut text = String::new();
    let (mut errors, mut warnings) = (0, 0);
    for f in &reports {
        if let Some(e) = &f.error {
            errors += 1;
            text.push_str(&format!("{e}\n"));
        }
        for d in &f.decls {
            let sig = d.signature.as_deref().unwrap_or("?");
            let mark = if d.ok { "✓" } else { "✗" };
            if d.ok && d.signature.as_deref().is_some_and(|s| !s.contains("->[")) {
                let b = d.bound.as_deref().unwrap_or("?");
                text.push_str(&format!("{} : {sig} [{b}] {mark}\n", d.name));
            } else {
                text.push_str(&format!("{} : {sig} {mark}\n", d.name));
            }
            for diag in &d.diagnostics {
                if diag.is_error() {
                    errors += 1;
                } else {
                    warnings += 1;
                }
                text.push_str(&format!("  {diag}\n"));
            }
        }
    }
    let failed = errors > 0 || (g.strict && warnings > 0);
    Ok(Output {
        text,
        json: json!({ "files": reports, "errors": errors, "warnings": warnings }),
        code: if failed { EXIT_FAIL } else { EXIT_OK },
    })
}

/// The argument literal for `ty`, checked in the program's scope.
fn parse_arg(program: &Program, src: &str, ty: &Term, cfg: &CheckerConfig) -> Result<Term, Exit> {
    let expr = parse_expr("<arg>", src).map_err(|e| Exit::usage(format!("argument `{src}`: {e}")))?;
    let term = elaborate_expr(&expr, program)
        .map_err(|e| Exit::usage(format!("argument `{src}`: {}", FrontendError::from(e))))?;
    Checker::new(cfg.clone())
        .check(&Context::new(), &term, ty)
        .map_err(|e| Exit::fail(format!("argument `{src}`: {e}")))?;
    Ok(term)
}

fn cmd_run(g: &GlobalOpts, cost: CostModel, path: &Path, entry: &str, args: &[String]) -> Result<Output, Exit> {
    let program = load(path, &cost)?;
    let decl = program
        .get(entry)
        .ok_or_else(|| Exit::usage(format!("no declaration named `{entry}` in {}", path.display())))?;
    let cfg = checker_config(g, program.cost);
    Checker::new(cfg.clone())
        .check_decl(&decl.ty, &decl.body)
        .map_err(|e| Exit::fail(e.in_decl(entry).to_string()))?;
    let mut ty = decl.ty.clone();
    let mut terms = Vec::new();
    for a in args {
        let Term::Pi(dom, _, cod) = ty else {
            return Err(Exit::usage(format!("`{entry}` takes {} argument(s), {} given", terms.len(), args.len())));
        };
        let t = parse_arg(&program, a, &dom, &cfg)?;
        ty = cod.subst(0, &t);
        terms.push(t);
    }
    let call = Term::apps(decl.reference(), terms);
    let (r, ledger) = trace_eval(&call, &EvalConfig::with_cost(program.cost)).map_err(|e| Exit::fail(e.to_string()))?;
    let mut text = format!("{} (cost {})\n", r.value, r.cost);
    if g.trace {
        text.push_str(&format!("{ledger}\n"));
    }
    let mut j = json!({ "value": r.value.to_string(), "cost": r.cost });
    if g.trace {
        j["ledger"] = serde_json::to_value(&ledger).unwrap_or(Json::Null);
    }
    Ok(Output {
        text,
        json: j,
        code: EXIT_OK,
    })
}

/// `0,1,2` or the inclusive range `0..16`.
pub fn parse_sizes(s: &str) -> Result<Vec<u64>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty size list".into());
    }
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| format!("bad size `{a}`"))?;
        let b: u64 = b.trim().parse().map_err(|_| format!("bad size `{b}`"))?;
        if a > b {
            return Err(format!("empty range {a}..{b}"));
        }
        return Ok((a..=b).collect());
    }
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| format!("bad size `{x}`")))
        .collect()
}

fn cmd_audit(g: &GlobalOpts, cost: CostModel, path: &Path, sizes: &str, only: Option<&str>) -> Result<Output, Exit> {
    let sizes = parse_sizes(sizes).map_err(Exit::usage)?;
    let program = load(path, &cost)?;
    let cfg = AuditConfig {
        sizes,
        sample_range: g.sample_range,
        mutation: None,
    };
    let targets: Vec<&str> = match only {
        Some(name) => {
            program
                .get(name)
                .ok_or_else(|| Exit::usage(format!("no declaration named `{name}`")))?;
            vec![name]
        }
        None => program.decls.iter().map(|d| d.name.as_str()).collect(),
    };
    let mut text = String::new();
    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    let mut errors = Vec::new();
    let mut code = EXIT_OK;
    for name in targets {
        if program.get(name).is_some_and(|d| d.expect_bound.is_none()) {
            text.push_str(&format!("skip {name}: no @expect_bound\n"));
            skipped.push(name.to_string());
            continue;
        }
        match audit(&program, name, &cfg) {
            Ok(r) => {
                if !r.ok() {
                    code = EXIT_FAIL;
                }
                text.push_str(&format!("{r}{}\n", if r.ok() { "PASS" } else { "FAIL" }));
                reports.push(r);
            }
            Err(e) => {
                code = EXIT_FAIL;
                text.push_str(&format!("audit {name}: {e}\n"));
                errors.push(json!({ "decl": name, "error": e.to_string() }));
            }
        }
    }
    Ok(Output {
        text,
        json: json!({ "reports": reports, "skipped": skipped, "errors": errors }),
        code,
    })
}

fn cmd_metatheory(
    g: &GlobalOpts,
    cost: CostModel,
    corpus_size: usize,
    substitution_pairs: usize,
    mutation: Option<Mutation>,
) -> Output {
    let mut cfg = SuiteConfig {
        corpus_size,
        substitution_pairs,
        sample_range: g.sample_range,
        mutation,
        ..SuiteConfig::with_seed(g.seed)
    };
    cfg.gen.cost = cost;
    let report = run_all(&cfg);
    let passed = report.suites.iter().filter(|s| s.ok()).count();
    Output {
        text: format!("{report}\n{passed}/{} suites pass\n", report.suites.len()),
        json: serde_json::to_value(&report).unwrap_or(Json::Null),
        code: if report.ok() { EXIT_OK } else { EXIT_FAIL },
    }
}

fn cmd_fmt(_g: &GlobalOpts, cost: CostModel, paths: &[PathBuf]) -> Result<Output, Exit> {
    let mut text = String::new();
    let mut files = Vec::new();
    for path in paths {
        let program = load(path, &cost)?;
        let formatted = pretty_program(&program);
        if paths.len() > 1 {
            text.push_str(&format!("-- {}\n", path.display()));
        }
        text.push_str(&formatted);
        files.push(json!({ "path": path.display().to_string(), "text": formatted }));
    }
    Ok(Output {
        text,
        json: json!({ "files": files }),
        code: EXIT_OK,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_lists() {
        assert_eq!(parse_sizes("0..3").unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(parse_sizes("1, 4,9").unwrap(), vec![1, 4, 9]);
        assert!(parse_sizes("").is_err());
        assert!(parse_sizes("5..2").is_err());
    }

    #[test]
    fn usage_error_exit_code() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(main_with(["rbmltt", "frobnicate"], &mut o, &mut e), EXIT_USAGE);
    }
}
