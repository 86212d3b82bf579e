//! Batch front end: read a query file, run the decision engines, emit a
//! machine-readable verdict report on stdout.
//!
//! Exit codes: 0 for any verdict, 2 for input errors, 3 for guard breaches.

mod query;
mod report;
mod run;

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicI32, AtomicUsize, Ordering};

use clap::Parser;

use query::{check_arity, parse_query, InputError, QuerySpec, Task};
use run::{execute, CliError, ExecFlags};

#[derive(Debug, Parser)]
#[command(
    name = "strata",
    about = "Separation, covering and membership for low concatenation-hierarchy levels",
    version
)]
struct Args {
    /// Query file (JSON; see the README for the schema)
    #[arg(long)]
    input: Option<PathBuf>,

    /// Directory of query files; each `q.json` gets a `q.report.json`
    #[arg(long, conflicts_with = "input")]
    batch: Option<PathBuf>,

    /// Override the query's task: separate|cover|member|imprint
    #[arg(long)]
    task: Option<String>,

    /// Override the query's level: st_half|st1|pol_at|st2|dd_half|dd1
    #[arg(long)]
    level: Option<String>,

    /// Override the basis: st0|dd0|at|custom:<monoid.json>
    #[arg(long)]
    basis: Option<String>,

    /// Attach the pointed Pol imprint (and the monoid dump) to the report
    #[arg(long)]
    dump_pol: bool,

    /// Attach the per-class BPol imprint (and the monoid dump) to the report
    #[arg(long)]
    dump_bpol: bool,

    /// Print outer-iteration sizes to stderr
    #[arg(long)]
    trace: bool,

    /// Monoid size guard (default 512)
    #[arg(long)]
    max_monoid: Option<usize>,

    /// Rating base guard |N| (default 16, hard cap 64)
    #[arg(long)]
    max_n: Option<usize>,

    /// Run a debugging oracle instead of the engines:
    /// j_trivial|upward_closed|k_subword
    #[arg(long)]
    oracle: Option<String>,
}

fn main() {
    let args = Args::parse();
    std::process::exit(real_main(&args));
}

fn real_main(args: &Args) -> i32 {
    match (&args.input, &args.batch) {
        (Some(path), None) => match process_file(path, args) {
            Ok(report) => {
                print!("{report}");
                0
            }
            Err(e) => {
                eprintln!("{e}");
                e.exit_code()
            }
        },
        (None, Some(dir)) => run_batch(dir, args),
        _ => {
            eprintln!("error: exactly one of --input or --batch is required");
            2
        }
    }
}

fn process_file(path: &Path, args: &Args) -> Result<String, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::Input(InputError::new(
            "",
            format!("cannot read `{}`: {e}", path.display()),
        ))
    })?;
    let mut spec = parse_query(&text)?;
    apply_overrides(&mut spec, args)?;
    let flags = ExecFlags {
        dump_pol: args.dump_pol,
        dump_bpol: args.dump_bpol,
        trace: args.trace,
        oracle: args.oracle.clone(),
    };
    execute(&spec, &flags)
}

fn apply_overrides(spec: &mut QuerySpec, args: &Args) -> Result<(), CliError> {
    if let Some(task) = &args.task {
        spec.task = Task::parse(task).ok_or_else(|| {
            CliError::Input(InputError::new("", format!("unknown task `{task}`")))
        })?;
        check_arity(spec.task, spec.args.len())?;
    }
    if let Some(level) = &args.level {
        spec.level = level.clone();
    }
    if let Some(basis) = &args.basis {
        spec.options.basis = Some(basis.clone());
    }
    if let Some(max_monoid) = args.max_monoid {
        spec.options.limits.max_monoid = max_monoid;
    }
    if let Some(max_n) = args.max_n {
        spec.options.limits.max_rating_base = max_n;
    }
    Ok(())
}

/// Run every query file in a directory on a small worker pool; reports are
/// written next to the inputs. The exit code is the worst one seen.
fn run_batch(dir: &Path, args: &Args) -> i32 {
    let mut entries: Vec<PathBuf> = match std::fs::read_dir(dir) {
        Ok(read) => read
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|path| {
                path.extension().is_some_and(|ext| ext == "json")
                    && !path.to_string_lossy().ends_with(".report.json")
            })
            .collect(),
        Err(e) => {
            eprintln!("error: cannot read `{}`: {e}", dir.display());
            return 2;
        }
    };
    entries.sort();
    if entries.is_empty() {
        eprintln!("error: no query files in `{}`", dir.display());
        return 2;
    }

    let next = AtomicUsize::new(0);
    let worst = AtomicI32::new(0);
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(4)
        .min(entries.len());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= entries.len() {
                    break;
                }
                let path = &entries[i];
                let code = match process_file(path, args) {
                    Ok(report) => {
                        let out = report_path(path);
                        match std::fs::write(&out, &report) {
                            Ok(()) => {
                                eprintln!("{} -> {}", path.display(), out.display());
                                0
                            }
                            Err(e) => {
                                eprintln!("error: cannot write `{}`: {e}", out.display());
                                2
                            }
                        }
                    }
                    Err(e) => {
                        eprintln!("{}: {e}", path.display());
                        e.exit_code()
                    }
                };
                worst.fetch_max(code, Ordering::SeqCst);
            });
        }
    });
    worst.load(Ordering::SeqCst)
}

fn report_path(input: &Path) -> PathBuf {
    input.with_extension("report.json")
}
