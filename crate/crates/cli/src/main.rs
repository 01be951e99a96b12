// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

use ctxprob_cli::canonical::to_canonical_string;
use ctxprob_cli::{
    analyze_model, analyze_statistics, emit_report, ingest_contingency_table, load_model,
    sample_model, AnalysisOptions, IngestError, InputEcho, InputKind,
};

#[derive(Parser)]
#[command(
    name = "ctxprob",
    version,
    about = "Contextual probability and interference analysis"
)]
struct Cli {
    /// Worker threads for sampling (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full analysis on a prespace model or a contingency table.
    Analyze(AnalyzeArgs),
    /// Emit a seeded frequency table for one variable of a model.
    Sample(SampleArgs),
    /// Load a model and check its invariants.
    Validate {
        #[arg(long)]
        model: PathBuf,
    },
}

#[derive(Args)]
#[command(group(ArgGroup::new("input").required(true).args(["model", "table"])))]
struct AnalyzeArgs {
    #[arg(long)]
    model: Option<PathBuf>,
    #[arg(long, conflicts_with = "seed")]
    table: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the model's sampling seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    variable: String,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    seed: u64,
    /// Select on this value of the model's a-observable and apply the kernel first.
    #[arg(long)]
    after: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read(path: &Path) -> Result<Vec<u8>, IngestError> {
    fs::read(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_output(out: Option<&Path>, bytes: &[u8]) -> Result<(), IngestError> {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|source| IngestError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|source| IngestError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

fn run(cli: Cli) -> Result<(), IngestError> {
    if let Some(n) = cli.threads {
        // Only fails if a global pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    match cli.command {
        Command::Analyze(args) => {
            let report = if let Some(path) = &args.model {
                let bytes = read(path)?;
                let model = load_model(&bytes)?;
                analyze_model(&model, InputEcho::of(InputKind::Model, &bytes), args.seed)?
            } else {
                let path = args.table.as_ref().expect("clap enforces one input");
                let bytes = read(path)?;
                let stats = ingest_contingency_table(&bytes)?;
                analyze_statistics(
                    stats,
                    &AnalysisOptions::default(),
                    InputEcho::of(InputKind::Table, &bytes),
                )?
            };
            write_output(args.out.as_deref(), &emit_report(&report))
        }
        Command::Sample(args) => {
            let bytes = read(&args.model)?;
            let model = load_model(&bytes)?;
            let report = sample_model(
                &model,
                InputEcho::of(InputKind::Model, &bytes),
                &args.variable,
                args.n,
                args.seed,
                args.after.as_deref(),
            )?;
            write_output(args.out.as_deref(), to_canonical_string(&report).as_bytes())
        }
        Command::Validate { model } => {
            let bytes = read(&model)?;
            let m = load_model(&bytes)?;
            let line = format!(
                "ok: {} prepoints, {} variables, context of {} prepoints\n",
                m.prespace.len(),
                m.variables.len(),
                m.context.len()
            );
            write_output(None, line.as_bytes())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
