use clap::{Parser, Subcommand};
use pathtsp::gen::{gen_gap, gen_random, GenSpec};
use pathtsp::graph::Graph;
use pathtsp::pipeline::{run_batch, run_pipeline};
use pathtsp::report::InstanceFailure;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "pathtsp",
    about = "LP-guided 3/2-approximation for shortest spanning s-t paths in unweighted graphs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance file and print its report.
    Solve {
        /// Instance in edge-list text format ("n m s t" header, one edge per line).
        file: PathBuf,
        /// Write the report as JSON to this path.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Re-derive every answer with the brute-force references in budget.
        #[arg(long)]
        verify: bool,
    },
    /// Generate an instance and print it (or write it with --out).
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
    /// Solve every instance in a directory, or a generated corpus.
    Batch {
        /// Directory of instance files, or a generator spec such as
        /// "random:count=30,nmin=4,nmax=8,seed=7", "gap:kmin=2,kmax=5",
        /// "named:p4,star".
        source: String,
        /// Re-derive every answer with the brute-force references in budget.
        #[arg(long)]
        verify: bool,
        /// Write one CSV row per instance to this path.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the full batch report as JSON to this path.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// Uniform spanning tree plus random extra edges, random terminals.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Three disjoint s-t paths of length k each.
    Gap {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match dispatch(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            1
        }
    };
    std::process::exit(code);
}

fn read_to_string(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_string(path: &Path, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(text: String, out: Option<PathBuf>) -> Result<(), String> {
    match out {
        Some(path) => write_string(&path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, String> {
    match cli.command {
        Command::Solve { file, json, verify } => {
            let text = read_to_string(&file)?;
            let g = Graph::parse(&text).map_err(|e| format!("{}: {e}", file.display()))?;
            let id = file
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "instance".to_string());
            let report = run_pipeline(&id, &g, verify).map_err(|e| format!("{id}: {e}"))?;
            print!("{}", report.render_human());
            if let Some(path) = json {
                let mut body = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
                body.push('\n');
                write_string(&path, &body)?;
            }
            Ok(0)
        }
        Command::Gen { what } => {
            let (g, out) = match what {
                GenCommand::Random { n, m, seed, out } => {
                    (gen_random(n, m, seed).map_err(|e| e.to_string())?, out)
                }
                GenCommand::Gap { k, out } => (gen_gap(k).map_err(|e| e.to_string())?, out),
            };
            emit(g.to_text(), out)?;
            Ok(0)
        }
        Command::Batch { source, verify, csv, json } => {
            let (instances, mut parse_failures) = load_batch(&source)?;
            let mut batch = run_batch(&instances, verify);
            batch.summary.instances += parse_failures.len();
            if !parse_failures.is_empty() {
                parse_failures.extend(batch.failures.drain(..));
                batch.failures = parse_failures;
                batch.summary.failed = batch.failures.len();
            }
            for report in &batch.reports {
                println!(
                    "{}: cost={} relaxation={} ratio={}{}",
                    report.id,
                    report.cost,
                    report.lp_value,
                    report.ratio_lp,
                    match (&report.opt, &report.ratio_opt) {
                        (Some(opt), Some(r)) => format!(" opt={opt} ratio_opt={r}"),
                        _ => String::new(),
                    }
                );
            }
            for failure in &batch.failures {
                println!("{}: FAILED {}", failure.id, failure.error);
            }
            let s = &batch.summary;
            println!(
                "{} instances, {} failed{}{}",
                s.instances,
                s.failed,
                match (&s.max_ratio_lp, &s.max_ratio_lp_instance) {
                    (Some(r), Some(id)) => format!(", worst cost/relaxation {r} ({id})"),
                    _ => String::new(),
                },
                match (&s.max_ratio_opt, &s.max_ratio_opt_instance) {
                    (Some(r), Some(id)) => format!(", worst cost/optimum {r} ({id})"),
                    _ => String::new(),
                }
            );
            if let Some(path) = csv {
                write_string(&path, &batch.csv())?;
            }
            if let Some(path) = json {
                let mut body = serde_json::to_string_pretty(&batch).map_err(|e| e.to_string())?;
                body.push('\n');
                write_string(&path, &body)?;
            }
            Ok(if batch.failures.is_empty() { 0 } else { 1 })
        }
    }
}

/// Instances from a directory (files sorted by name, unreadable ones
/// reported but not fatal) or from a generator spec.
fn load_batch(source: &str) -> Result<(Vec<(String, Graph)>, Vec<InstanceFailure>), String> {
    let path = Path::new(source);
    if path.is_dir() {
        let mut files: Vec<PathBuf> = std::fs::read_dir(path)
            .map_err(|e| format!("{source}: {e}"))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.is_file())
            .collect();
        files.sort();
        let mut instances = Vec::new();
        let mut failures = Vec::new();
        for file in files {
            let id = file
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| file.display().to_string());
            match read_to_string(&file).and_then(|text| {
                Graph::parse(&text).map_err(|e| format!("{}: {e}", file.display()))
            }) {
                Ok(g) => instances.push((id, g)),
                Err(error) => failures.push(InstanceFailure { id, error }),
            }
        }
        return Ok((instances, failures));
    }
    let spec = GenSpec::parse(source).map_err(|e| {
        format!("{source}: not a directory, and not a generator spec either ({e})")
    })?;
    let instances = spec.instances().map_err(|e| e.to_string())?;
    Ok((instances, Vec::new()))
}
