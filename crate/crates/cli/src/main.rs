use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use cope_cli::{analyze, load_cope, load_matrix, nnr_json, reduce_file, render_svg, summary, verify_json, Backend, Flags};
use cope_core::enmf::{ennr, EnnrOptions};
use cope_core::nnr::Oracle;
use cope_core::{CopeError, Float, QuadraticScalar, Result, Scalar};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "cope", version, about = "Ontological models, nonnegative rank and contextuality of COPE matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// exact (Q(sqrt d)) or float
    #[arg(long, global = true, default_value = "exact")]
    backend: Backend,
    /// float comparison tolerance
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// largest inner dimension tried by the ENNR search (default r^2)
    #[arg(long, global = true)]
    max_k: Option<usize>,
    /// print JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    /// seed for the heuristic NMF (default: derived from the matrix)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// NNR decision strategy: exact, heuristic or auto
    #[arg(long, global = true, default_value = "auto")]
    oracle: Oracle,
    /// block heights for CSV input, e.g. 2,2
    #[arg(long, global = true, value_delimiter = ',')]
    blocks: Option<Vec<usize>>,
}

#[derive(Subcommand)]
enum Command {
    /// Rank, NNR, ENNR and the contextuality verdict
    Analyze { path: String },
    /// Check a model C = R E
    Verify {
        c: String,
        r: String,
        e: String,
        /// also require rank R = rank E = rank C
        #[arg(long)]
        noncontextual: bool,
    },
    /// Nonnegative rank bounds, or a decision for a given k
    Nnr {
        path: String,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Equirank nonnegative rank search with its transcript
    Ennr { path: String },
    /// Emit the reduced matrix for inner dimension k as a COPE file
    Reduce {
        path: String,
        #[arg(long)]
        k: usize,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Draw inner, outer and minimal nested polygons of a rank-3 matrix
    Render { path: String, out: PathBuf },
    /// Shipped example matrices
    Fixtures {
        #[command(subcommand)]
        action: FixtureAction,
    },
}

#[derive(Subcommand)]
enum FixtureAction {
    List,
    Emit {
        name: String,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

fn emit(text: &str) {
    use std::io::Write;
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = writeln!(std::io::stdout(), "{text}");
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CopeError::Io(format!("{}: {e}", p.display()))),
        None => {
            emit(text.trim_end_matches('\n'));
            Ok(())
        }
    }
}

fn print_value(v: &Value, json_out: bool, text: impl FnOnce(&Value) -> String) {
    if json_out {
        emit(&serde_json::to_string_pretty(v).expect("serializable"));
    } else {
        emit(&text(v));
    }
}

fn run<T: Scalar>(cmd: &Command, common: &Common, flags: &Flags) -> Result<i32> {
    match cmd {
        Command::Analyze { path } => {
            let c = load_cope::<T>(path, flags)?;
            let start = Instant::now();
            let mut report = analyze(&c, flags)?;
            report["timing_ms"] = json!(start.elapsed().as_millis() as u64);
            print_value(&report, common.json, summary);
        }
        Command::Verify { c, r, e, noncontextual } => {
            let cm = load_cope::<T>(c, flags)?;
            let rm = load_matrix::<T>(r, flags)?;
            let em = load_matrix::<T>(e, flags)?;
            let (check, v) = verify_json(&cm, &rm, &em, *noncontextual)?;
            print_value(&v, common.json, |v| match v["failure"].as_str() {
                None => format!("pass (inner dimension {}, ranks C/R/E = {}/{}/{})", v["inner_dim"], v["rank_c"], v["rank_r"], v["rank_e"]),
                Some(f) => format!("fail: {f}"),
            });
            return Ok(if check.passed { 0 } else { 1 });
        }
        Command::Nnr { path, k } => {
            let m = load_matrix::<T>(path, flags)?;
            let v = nnr_json(&m, *k, flags)?;
            print_value(&v, common.json, |v| match k {
                Some(k) => format!("NNR <= {k}: {}", v["answer"].as_str().unwrap_or("")),
                None => match v["nnr"].as_u64() {
                    Some(n) => format!("NNR = {n} ({})", v["method"].as_str().unwrap_or("")),
                    None => format!("{} <= NNR <= {} ({})", v["lower"], v["upper"], v["method"].as_str().unwrap_or("")),
                },
            });
        }
        Command::Ennr { path } => {
            let c = load_cope::<T>(path, flags)?;
            let opts = EnnrOptions { max_k: flags.max_k, oracle: flags.oracle, seed: flags.seed };
            let v = ennr(&c, &opts)?.to_json();
            print_value(&v, common.json, |v| {
                let mut lines = vec![format!("ENNR {}", match v["ennr"].as_u64() {
                    Some(k) => k.to_string(),
                    None if v["no_model"] == json!(true) => "none (no noncontextual model)".into(),
                    None => format!("unknown (upper bound {})", v["upper_bound"]),
                })];
                for step in v["transcript"].as_array().into_iter().flatten() {
                    lines.push(format!("  k = {:<3} {:<20} {}", step["k"], step["route"].as_str().unwrap_or(""), step["verdict"].as_str().unwrap_or("")));
                }
                lines.join("\n")
            });
        }
        Command::Reduce { path, k, out } => {
            let c = load_cope::<T>(path, flags)?;
            let file = reduce_file(&c, *k)?;
            write_out(out, &(file.to_json() + "\n"))?;
        }
        Command::Render { path, out } => {
            let m = load_matrix::<T>(path, flags)?;
            let svg = render_svg(&m)?;
            write_out(&Some(out.clone()), &svg)?;
        }
        Command::Fixtures { action } => match action {
            FixtureAction::List => {
                for (name, text) in cope_core::fixtures::FIXTURES {
                    let desc = cope_core::io::MatrixFile::from_json(text)?.description.unwrap_or_default();
                    emit(&format!("{name:<28} {desc}"));
                }
            }
            FixtureAction::Emit { name, out } => {
                let text = cope_core::fixtures::fixture_text(name)
                    .ok_or_else(|| CopeError::Io(format!("no fixture named '{name}'")))?;
                write_out(out, text)?;
            }
        },
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.common.tol {
        cope_core::field::set_tolerance(t);
    }
    let flags = Flags {
        backend: cli.common.backend,
        max_k: cli.common.max_k,
        seed: cli.common.seed,
        oracle: cli.common.oracle,
        blocks: cli.common.blocks.clone(),
    };
    let result = match flags.backend {
        Backend::Exact => run::<QuadraticScalar>(&cli.command, &cli.common, &flags),
        Backend::Float => run::<Float>(&cli.command, &cli.common, &flags),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
