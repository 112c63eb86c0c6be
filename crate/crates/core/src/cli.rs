//! The `ksemijoin` command line.
//!
//! Exit codes: `0` success or "holds", `1` a negative verdict (fails,
//! cyclic, inconsistent, verifier failure), `2` errors and undecided results.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::analysis::{full_report, PropertyReport, Verdict};
use crate::error::{Error, Result};
use crate::krelation::{consistent, ConsistencyOptions, KRel};
use crate::monoid::MonoidRef;
use crate::reducer::{
    compile_full_reducer, execute, format_program, parse_program, verify_full_reducer,
    VerifyOptions,
};
use crate::schema::{gyo, Acyclicity, Hypergraph};
use crate::semijoin::SemijoinImpl;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "ksemijoin", version, about = "Semijoins and full reducers over annotated relations")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Node budget for exhaustive consistency searches.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub budget: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monoid property checks.
    #[command(subcommand)]
    Monoid(MonoidCmd),
    /// Schema acyclicity checks.
    #[command(subcommand)]
    Schema(SchemaCmd),
    /// Run a semijoin program (by default the compiled full reducer).
    Reduce(ReduceArgs),
    /// Randomized full-reducer verification.
    Verify(VerifyArgs),
    /// Relation utilities.
    #[command(subcommand)]
    Relation(RelationCmd),
}

#[derive(Debug, Subcommand)]
pub enum MonoidCmd {
    Check { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum SchemaCmd {
    Check { file: PathBuf },
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[arg(long)]
    pub schema: PathBuf,
    #[arg(long)]
    pub monoid: PathBuf,
    /// Program file; defaults to the compiled full reducer.
    #[arg(long)]
    pub program: Option<PathBuf>,
    /// Directory for the reduced relations and `trace.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// One CSV file per hyperedge, in schema order.
    #[arg(required = true)]
    pub relations: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub schema: PathBuf,
    #[arg(long)]
    pub monoid: PathBuf,
    #[arg(long, default_value_t = 500)]
    pub trials: usize,
    #[arg(long, default_value_t = 8)]
    pub max_support: usize,
    /// Where to write the failing trials for replay.
    #[arg(long)]
    pub bundle: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum RelationCmd {
    /// Marginal onto a comma-separated attribute list.
    Marginal {
        #[arg(long)]
        monoid: PathBuf,
        #[arg(long, value_delimiter = ',')]
        attrs: Vec<String>,
        #[arg(long)]
        schema: Option<PathBuf>,
        file: PathBuf,
    },
    /// Decide consistency of two relations.
    Consistent {
        #[arg(long)]
        monoid: PathBuf,
        #[arg(long)]
        schema: Option<PathBuf>,
        left: PathBuf,
        right: PathBuf,
    },
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let opts = ConsistencyOptions { budget: cli.budget };
    match &cli.command {
        Command::Monoid(MonoidCmd::Check { file }) => monoid_check(cli.format, file, out),
        Command::Schema(SchemaCmd::Check { file }) => schema_check(cli.format, file, out),
        Command::Reduce(a) => reduce(cli.format, a, out),
        Command::Verify(a) => verify(cli, a, opts, out),
        Command::Relation(RelationCmd::Marginal { monoid, attrs, schema, file }) => {
            let m = MonoidRef::load(monoid)?;
            let r = load_relation(&m, schema.as_deref(), file)?;
            let y = r.attrs().restrict(attrs)?;
            let mg = r.marginal(&y)?;
            match cli.format {
                Format::Text => write!(out, "{}", mg.to_csv())?,
                Format::Json => writeln!(out, "{}", mg.to_json_value())?,
            }
            Ok(0)
        }
        Command::Relation(RelationCmd::Consistent { monoid, schema, left, right }) => {
            let m = MonoidRef::load(monoid)?;
            let r = load_relation(&m, schema.as_deref(), left)?;
            let t = load_relation(&m, schema.as_deref(), right)?;
            let res = consistent(&r, &t, &opts)?;
            match cli.format {
                Format::Text => {
                    let verdict = if res.consistent { "consistent" } else { "inconsistent" };
                    writeln!(out, "{verdict} (strategy: {})", strategy_name(&res.strategy))?;
                    if let Some(w) = &res.witness {
                        write!(out, "{}", w.to_csv())?;
                    }
                }
                Format::Json => writeln!(
                    out,
                    "{}",
                    json!({
                        "consistent": res.consistent,
                        "strategy": res.strategy,
                        "witness": res.witness.as_ref().map(KRel::to_json_value),
                    })
                )?,
            }
            Ok(if res.consistent { 0 } else { 1 })
        }
    }
}

fn strategy_name(s: &crate::krelation::Strategy) -> String {
    serde_json::to_value(s)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn load_relation(m: &MonoidRef, schema: Option<&Path>, file: &Path) -> Result<KRel> {
    let universe = schema.map(|s| Hypergraph::load(s)?.universe()).transpose()?;
    KRel::from_csv_file(m, universe.as_ref(), file)
}

fn report_line(r: &PropertyReport) -> String {
    let prov = serde_json::to_value(r.provenance).unwrap();
    let mut line = format!("{}: {} ({})", r.property, r.verdict, prov.as_str().unwrap());
    if r.counterexample.is_some() {
        line.push_str(&format!(" counterexample: {}", r.counterexample_text()));
    }
    if let Some(b) = &r.basis {
        line.push_str(&format!(" [{b}]"));
    }
    line
}

fn monoid_check(format: Format, file: &Path, out: &mut dyn Write) -> Result<i32> {
    let m = MonoidRef::load(file)?;
    let reports = full_report(&m);
    match format {
        Format::Text => {
            writeln!(out, "monoid: {}", m.name())?;
            for r in &reports {
                writeln!(out, "{}", report_line(r))?;
            }
        }
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&json!({ "monoid": m.name(), "reports": reports }))?
        )?,
    }
    Ok(match reports.last().unwrap().verdict {
        Verdict::Holds => 0,
        Verdict::Fails => 1,
        Verdict::Unknown => 2,
    })
}

fn schema_check(format: Format, file: &Path, out: &mut dyn Write) -> Result<i32> {
    let h = Hypergraph::load(file)?;
    match gyo(&h) {
        Acyclicity::Acyclic(ord) => {
            let prog = compile_full_reducer(&h)?;
            let text = format_program(&h, &prog);
            match format {
                Format::Text => {
                    writeln!(out, "acyclic")?;
                    writeln!(out, "ordering: {}", ord.describe(&h))?;
                    writeln!(out, "program ({} statements):", prog.len())?;
                    write!(out, "{text}")?;
                }
                Format::Json => writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "acyclic": true,
                        "ordering": ord.order.iter().map(|&e| &h.edge(e).name).collect::<Vec<_>>(),
                        "parents": ord.parents.iter().map(|p| p.map(|j| j + 1)).collect::<Vec<_>>(),
                        "program": text.lines().collect::<Vec<_>>(),
                    }))?
                )?,
            }
            Ok(0)
        }
        Acyclicity::Cyclic(res) => {
            match format {
                Format::Text => writeln!(out, "cyclic\nresidual: {res}")?,
                Format::Json => writeln!(
                    out,
                    "{}",
                    json!({ "acyclic": false, "residual": res.to_string() })
                )?,
            }
            Ok(1)
        }
    }
}

fn reduce(format: Format, a: &ReduceArgs, out: &mut dyn Write) -> Result<i32> {
    let h = Hypergraph::load(&a.schema)?;
    let m = MonoidRef::load(&a.monoid)?;
    if a.relations.len() != h.len() {
        return Err(Error::Contract(format!(
            "{} relation files given for {} hyperedges",
            a.relations.len(),
            h.len()
        )));
    }
    let s = match SemijoinImpl::for_monoid(&m) {
        Ok(s) => s,
        Err(e) => {
            writeln!(out, "no semijoin function: {e}")?;
            return Ok(2);
        }
    };
    let prog = match &a.program {
        Some(p) => parse_program(&h, &std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?)?,
        None => match compile_full_reducer(&h) {
            Ok(p) => p,
            Err(Error::Cyclic { residual }) => {
                writeln!(out, "cyclic schema and no program given; residual: {residual}")?;
                return Ok(1);
            }
            Err(e) => return Err(e),
        },
    };
    let universe = h.universe()?;
    let rels = a
        .relations
        .iter()
        .map(|p| KRel::from_csv_file(&m, Some(&universe), p))
        .collect::<Result<Vec<_>>>()?;
    let rels = rels
        .into_iter()
        .zip(h.edges())
        .map(|(r, e)| {
            if r.attrs() == &e.attrs {
                Ok(r)
            } else {
                Err(Error::Attribute(format!(
                    "relation for {} has attributes {}, expected {}",
                    e.name,
                    r.attrs(),
                    e.attrs
                )))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let trace = execute(&h, &prog, &rels, &s)?;
    let trace_json = serde_json::to_string_pretty(&trace.to_json(&h))?;
    match &a.out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            for (e, r) in h.edges().iter().zip(&trace.outputs) {
                std::fs::write(dir.join(format!("{}.csv", e.name)), r.to_csv())?;
            }
            std::fs::write(dir.join("trace.json"), &trace_json)?;
            writeln!(out, "wrote {} relations to {}", h.len(), dir.display())?;
        }
        None => match format {
            Format::Text => {
                for (e, r) in h.edges().iter().zip(&trace.outputs) {
                    writeln!(out, "# {}", e.name)?;
                    write!(out, "{}", r.to_csv())?;
                }
            }
            Format::Json => writeln!(out, "{trace_json}")?,
        },
    }
    Ok(0)
}

fn verify(cli: &Cli, a: &VerifyArgs, consistency: ConsistencyOptions, out: &mut dyn Write) -> Result<i32> {
    let h = Hypergraph::load(&a.schema)?;
    let m = MonoidRef::load(&a.monoid)?;
    let s = SemijoinImpl::for_monoid(&m)?;
    let opts = VerifyOptions {
        trials: a.trials,
        seed: cli.seed,
        max_support: a.max_support,
        consistency,
    };
    let rep = verify_full_reducer(&h, &s, &opts)?;
    let report: Value = rep.to_json();
    let failed = !rep.all_passed();
    if let (true, Some(path)) = (failed, &a.bundle) {
        std::fs::write(path, serde_json::to_string_pretty(&report)?)?;
    }
    match cli.format {
        Format::Text => {
            writeln!(
                out,
                "{} trials: {} passed, {} failed, {} skipped",
                rep.trials.len(),
                rep.passed(),
                rep.failures().len(),
                rep.skipped()
            )?;
            if let Some(t) = rep.failures().first() {
                writeln!(out, "first failure: trial {} seed {}", t.trial, t.seed)?;
            }
            if let (true, Some(path)) = (failed, &a.bundle) {
                writeln!(out, "replay bundle: {}", path.display())?;
            }
        }
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?,
    }
    Ok(if failed { 1 } else { 0 })
}
