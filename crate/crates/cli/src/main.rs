//! Command-line front end: materializes a chain from a spec file and runs
//! named analysis tasks over it.
//!
//! Exit codes: 0 success, 2 bad input (spec, flags, unknown names),
//! 3 horizon too short to settle a requested question, 4 internal error.

mod artifacts;
mod tasks;

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use equichain_core::betti::{betti_engine_by_name, betti_engine_names, BettiEngine};
use equichain_core::chain::{materialize, ChainSpec};
use equichain_core::ring::{order_by_name, order_names, MonomialOrder};
use equichain_core::{Error, Result};

use artifacts::{Artifacts, Format};
use tasks::{task_by_name, tasks, Task, TaskContext};

#[derive(Parser)]
#[command(name = "equichain", version, about = "invariant chains of ideals: materialization and asymptotics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run analysis tasks on one chain spec file.
    Run(RunArgs),
    /// Run the same tasks on every `.chain` file in a directory.
    Batch(BatchArgs),
    /// List registered tasks, term orders, and Betti engines.
    List,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Materialize widths 1..=N (default: the spec's horizon).
    #[arg(long)]
    upto: Option<u32>,
    /// Term order for polynomial arithmetic and initial ideals.
    #[arg(long, default_value = "grevlex")]
    order: String,
    /// Override the coefficient field characteristic from the spec file.
    #[arg(long = "char")]
    characteristic: Option<u64>,
    /// Comma-separated task names; `list` shows the registry.
    #[arg(long, value_delimiter = ',', default_value = "report")]
    tasks: Vec<String>,
    /// Betti table engine.
    #[arg(long, default_value = "koszul")]
    engine: String,
    /// Write artifacts into this directory instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Artifact format.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Worker threads for per-width computations.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Recorded in the run header; reserved for randomized diagnostics.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct RunArgs {
    /// Chain spec file (JSON).
    #[arg(long)]
    chain: PathBuf,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct BatchArgs {
    /// Directory scanned (non-recursively) for `.chain` files.
    #[arg(long)]
    dir: PathBuf,
    #[command(flatten)]
    common: CommonArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = catch_unwind(AssertUnwindSafe(|| dispatch(cli)));
    let code = match outcome {
        Ok(Ok(())) => 0,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
        Err(_) => {
            eprintln!("error: internal panic");
            4
        }
    };
    ExitCode::from(code)
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => {
            let resolved = Resolved::from_common(&args.common)?;
            configure_jobs(args.common.jobs);
            run_one(&args.chain, &args.common, &resolved)
        }
        Command::Batch(args) => {
            configure_jobs(args.common.jobs);
            run_batch(&args)
        }
        Command::List => {
            list();
            Ok(())
        }
    }
}

/// Failure classes to exit codes: bad input 2, insufficient horizon 3,
/// violated internals 4.
fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::InvalidSpec { .. }
        | Error::ZeroIdeal { .. }
        | Error::UnitIdeal { .. }
        | Error::Unsupported { .. }
        | Error::IndexOutOfRange { .. }
        | Error::UnboundedAmbient { .. } => 2,
        Error::HorizonTooShort { .. }
        | Error::NotStabilized { .. }
        | Error::TooFewPoints { .. }
        | Error::GeneratorCapExceeded { .. } => 3,
        Error::Internal(_) => 4,
    }
}

/// Flag strings resolved against the registries, shared by run and batch.
struct Resolved {
    order: &'static dyn MonomialOrder,
    engine: &'static dyn BettiEngine,
    tasks: Vec<&'static dyn Task>,
}

impl Resolved {
    fn from_common(common: &CommonArgs) -> Result<Self> {
        let order = order_by_name(&common.order).ok_or_else(|| {
            Error::Unsupported(format!(
                "unknown order {:?}; known: {}",
                common.order,
                order_names().join(", ")
            ))
        })?;
        let engine = betti_engine_by_name(&common.engine).ok_or_else(|| {
            Error::Unsupported(format!(
                "unknown engine {:?}; known: {}",
                common.engine,
                betti_engine_names().join(", ")
            ))
        })?;
        let mut resolved = Vec::new();
        for name in &common.tasks {
            let task = task_by_name(name).ok_or_else(|| {
                Error::Unsupported(format!(
                    "unknown task {:?}; known: {}",
                    name,
                    tasks().iter().map(|t| t.name()).collect::<Vec<_>>().join(", ")
                ))
            })?;
            resolved.push(task);
        }
        if resolved.is_empty() {
            return Err(Error::Unsupported("no tasks requested".into()));
        }
        Ok(Resolved { order, engine, tasks: resolved })
    }
}

fn load_spec(path: &Path, characteristic: Option<u64>) -> Result<ChainSpec> {
    let text = fs::read_to_string(path).map_err(|e| {
        Error::InvalidSpec(format!("cannot read {}: {e}", path.display()))
    })?;
    match characteristic {
        // Coefficients are parsed under the spec's field, so the override
        // must land in the raw JSON before parsing, not on the parsed spec.
        Some(p) => {
            let mut value: Value = serde_json::from_str(&text)
                .map_err(|e| Error::InvalidSpec(format!("{}: {e}", path.display())))?;
            value["field"] = json!({ "char": p });
            ChainSpec::from_json(&value.to_string())
        }
        None => ChainSpec::from_json(&text),
    }
}

fn run_one(chain: &Path, common: &CommonArgs, resolved: &Resolved) -> Result<()> {
    let spec = load_spec(chain, common.characteristic)?;
    let upto = common.upto.unwrap_or(spec.horizon);
    let snaps = materialize(&spec, upto)?;
    let ctx = TaskContext::new(&spec, &snaps, resolved.order, resolved.engine, upto, common.format);

    let mut sink = Artifacts::new(common.out.clone())?;
    sink.emit("run_config.json".to_string(), run_config(&spec, chain, common, resolved));
    let mut failure: Option<Error> = None;
    for task in &resolved.tasks {
        if let Err(e) = task.run(&ctx, &mut sink) {
            failure = Some(e);
            break;
        }
    }
    // Flush whatever was produced; partial results still get written even
    // when a task fails.
    for path in sink.finish()? {
        eprintln!("wrote {path}");
    }
    match failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// The effective configuration, echoed into every artifact set so reruns
/// are self-describing.
fn run_config(spec: &ChainSpec, chain: &Path, common: &CommonArgs, resolved: &Resolved) -> String {
    let doc = json!({
        "chain": spec.name,
        "char": spec.field.characteristic(),
        "engine": resolved.engine.name(),
        "format": format!("{:?}", common.format).to_lowercase(),
        "jobs": common.jobs.max(1),
        "order": resolved.order.name(),
        "seed": common.seed,
        "spec_file": chain.display().to_string(),
        "tasks": resolved.tasks.iter().map(|t| t.name()).collect::<Vec<_>>(),
        "upto": common.upto.unwrap_or(spec.horizon),
        "version": env!("CARGO_PKG_VERSION"),
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

fn run_batch(args: &BatchArgs) -> Result<()> {
    let resolved = Resolved::from_common(&args.common)?;
    let entries = fs::read_dir(&args.dir).map_err(|e| {
        Error::InvalidSpec(format!("cannot read directory {}: {e}", args.dir.display()))
    })?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "chain"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::InvalidSpec(format!(
            "no .chain files in {}",
            args.dir.display()
        )));
    }
    let mut worst: Option<Error> = None;
    for file in &files {
        let stem = file.file_stem().expect("file has a stem").to_string_lossy().into_owned();
        let mut common = args.common.clone();
        common.out = args.common.out.as_ref().map(|out| out.join(&stem));
        match run_one(file, &common, &resolved) {
            Ok(()) => eprintln!("{stem}: ok"),
            Err(e) => {
                eprintln!("{stem}: {e}");
                let keep = worst
                    .as_ref()
                    .is_none_or(|w| exit_code_for(&e) > exit_code_for(w));
                if keep {
                    worst = Some(e);
                }
            }
        }
    }
    match worst {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn list() {
    println!("tasks:");
    for task in tasks() {
        println!("  {:12} {}", task.name(), task.summary());
    }
    println!("orders: {}", order_names().join(", "));
    println!("engines: {}", betti_engine_names().join(", "));
}

/// Installs the rayon pool before any task runs.
fn configure_jobs(jobs: usize) {
    let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global();
}
