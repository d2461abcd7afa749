//! `folkgraph` command line: build the workspace KB, run expansion plans,
//! detect values in sentences and evaluate an annotated corpus.
//!
//! Exit codes: 0 success, 2 input or usage error, 3 consistency error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use folkgraph::pipeline::{self, ExpandTarget, Manifest, PipelineError, WORKSPACE_ENV};

#[derive(Parser)]
#[command(name = "folkgraph", version, about = "Value knowledge graph toolkit")]
struct Cli {
    /// Pipeline manifest (TOML).
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,

    /// Workspace directory; overrides the manifest setting.
    #[arg(long, global = true, env = WORKSPACE_ENV)]
    workspace: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load the manifest graphs and value table into the workspace.
    BuildKb,
    /// Run expansion plans and write trigger graphs.
    Expand(ExpandArgs),
    /// Detect value activations in sentences.
    Detect(DetectArgs),
    /// Corpus statistics, optionally against detection output.
    Eval(EvalArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ExpandArgs {
    /// Value whose plan to run (IRI or CURIE).
    #[arg(long)]
    value: Option<String>,
    /// Run every plan listed in the manifest.
    #[arg(long)]
    all: bool,
}

#[derive(Args)]
struct DetectArgs {
    /// Sentences: JSONL with `id` and `text`, or plain text one per line.
    #[arg(long)]
    input: PathBuf,
    /// Output directory; defaults to `<workspace>/detections`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct EvalArgs {
    /// `summary.jsonl` written by `detect`; omitted means stats-only.
    #[arg(long)]
    detections: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<(), PipelineError> {
    let manifest_path = cli.manifest.ok_or_else(|| PipelineError::Input("--manifest is required".into()))?;
    let m = Manifest::load(&manifest_path, cli.workspace)?;
    match cli.command {
        Command::BuildKb => {
            let summary = pipeline::build_kb(&m)?;
            print!("{summary}");
            println!("workspace: {}", m.workspace.display());
        }
        Command::Expand(args) => {
            let target = match args.value {
                Some(v) => ExpandTarget::Value(v),
                None => ExpandTarget::All,
            };
            let done = pipeline::expand(&m, &target)?;
            println!("plans: {}", done.len());
            for s in &done {
                let value = m.prefixes.display(&s.value);
                let file = s.graph_file.as_ref().map_or("-".to_string(), |p| p.display().to_string());
                println!("  {value}: {} trigger edges -> {file}", s.edges);
                for (kind, q) in &s.report.per_query {
                    println!(
                        "    {:<14} {:<13} {} candidates, {} accepted",
                        kind.as_str(),
                        q.mode.as_str(),
                        q.candidates.len(),
                        q.accepted.len()
                    );
                }
            }
        }
        Command::Detect(args) => {
            if args.jobs == 0 {
                return Err(PipelineError::Input("--jobs must be at least 1".into()));
            }
            let out = args.out.unwrap_or_else(|| m.workspace.join("detections"));
            let s = pipeline::detect(&m, &args.input, &out, args.jobs)?;
            println!(
                "sentences: {}  graphs: {}  noGraph: {}  with values: {}",
                s.sentences, s.graphs, s.no_graph, s.detected
            );
            println!("summary: {}", s.summary_file.display());
        }
        Command::Eval(args) => {
            let outcome = pipeline::evaluate(&m, args.detections.as_deref())?;
            let r = &outcome.report;
            if outcome.skipped_rows > 0 {
                eprintln!("skipped {} malformed corpus rows", outcome.skipped_rows);
            }
            print!("{}", r.table1());
            println!();
            if outcome.with_detections {
                print!("{}", r.table2());
                println!(
                    "value-annotated: {} rows, {} unique texts",
                    r.mft_annotated, r.mft_annotated_unique
                );
            } else {
                println!("stats-only: no detections given");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
