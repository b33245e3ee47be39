//! Command-line front end: parses a workspace file, runs one command (or the
//! file's task list) and emits a report.
//!
//! Exit status: 0 when every asserted identity holds, 1 on assertion
//! failure, 2 on input errors.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use ruth::report::Report;
use ruth::workspace::{Command, RunOptions, Workspace};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Parser, Debug)]
#[command(
    name = "ruth",
    version,
    about = "Exact computations with representations up to homotopy of finite groupoids"
)]
struct Cli {
    /// validate | cohomology | pages | e2 | dual | cone | pullback |
    /// transfer | invert | vanish | resolve | banal | hom | run
    command: String,

    /// Workspace file (JSON interchange format)
    file: PathBuf,

    /// Representation to operate on (defaults to the only one)
    #[arg(long)]
    rep: Option<String>,

    /// Target representation (for `hom`)
    #[arg(long)]
    target: Option<String>,

    /// Morphism to operate on (for `cone`, `invert`)
    #[arg(long)]
    morphism: Option<String>,

    /// Functor to pull back along (for `pullback`)
    #[arg(long)]
    functor: Option<String>,

    /// G-space to check (for `banal`)
    #[arg(long)]
    gspace: Option<String>,

    /// Total-degree window, e.g. `-2..5` (default: -2 .. b+3)
    #[arg(long, allow_hyphen_values = true)]
    degrees: Option<String>,

    /// Last spectral page to compute
    #[arg(long, default_value_t = 3)]
    pages: i64,

    /// Resolution depth
    #[arg(long, default_value_t = 2)]
    levels: usize,

    /// Fiber dimensions per quotient orbit (for `banal`)
    #[arg(long, value_delimiter = ',')]
    fiber_dims: Option<Vec<usize>>,

    /// Parallelism width for independent degree computations
    #[arg(long, default_value_t = 1)]
    threads: usize,

    /// Write the JSON report here as well
    #[arg(long)]
    report: Option<PathBuf>,

    /// Output format on stdout
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

fn parse_degrees(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected `a..b`, got `{s}`"))?;
    let a = a.trim().parse().map_err(|e| format!("bad lower bound: {e}"))?;
    let b = b.trim().parse().map_err(|e| format!("bad upper bound: {e}"))?;
    if a > b {
        return Err(format!("empty window {a}..{b}"));
    }
    Ok((a, b))
}

fn emit(reports: &[Report], cli: &Cli) -> std::io::Result<()> {
    let json = if reports.len() == 1 {
        reports[0].to_json()
    } else {
        serde_json::to_string_pretty(reports).expect("reports serialize")
    };
    match cli.format {
        Format::Json => println!("{json}"),
        Format::Table => {
            for r in reports {
                print!("{}", r.render_text());
            }
        }
    }
    if let Some(path) = &cli.report {
        std::fs::write(path, json)?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Vec<Report>, (u8, String)> {
    let text = std::fs::read_to_string(&cli.file)
        .map_err(|e| (2, format!("cannot read {}: {e}", cli.file.display())))?;
    let ws = Workspace::parse_str(&text).map_err(|e| (2, format!("input error: {e}")))?;
    let degrees = match &cli.degrees {
        Some(s) => Some(parse_degrees(s).map_err(|e| (2, e))?),
        None => None,
    };
    let opts = RunOptions {
        rep: cli.rep.clone(),
        target: cli.target.clone(),
        morphism: cli.morphism.clone(),
        functor: cli.functor.clone(),
        gspace: cli.gspace.clone(),
        degrees,
        pages: Some(cli.pages),
        levels: Some(cli.levels),
        fiber_dims: cli.fiber_dims.clone(),
        threads: cli.threads,
    };
    if cli.command == "run" {
        return ws.run_tasks(cli.threads).map_err(|e| (2, format!("task error: {e}")));
    }
    let cmd = Command::from_str(&cli.command).map_err(|e| (2, e.to_string()))?;
    ws.run(cmd, &opts).map(|r| vec![r]).map_err(|e| match e {
        // computation-level failures of asserted identities exit with 1
        ruth::Error::DimMismatch { .. } => (1, format!("assertion failure: {e}")),
        other => (2, format!("input error: {other}")),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(reports) => {
            if emit(&reports, &cli).is_err() {
                return ExitCode::from(2);
            }
            if reports.iter().all(Report::ok) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
