//! Batch command-line front end. One analysis per invocation; the report is
//! printed to standard output as a single JSON document, with a human table
//! appended under `--pretty`. Exit status: 0 for a completed analysis
//! regardless of verdict, 2 for input errors, 3 for unsupported cases.

use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use nijenhuis::analysis::{self, Command as AnalysisCommand, Report};
use nijenhuis::Error;

#[derive(Parser)]
#[command(
    name = "nijenhuis",
    version,
    about = "Exact integrability analysis for tensor fields via Nijenhuis-type obstructions"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// JSON analysis document
    #[arg(long)]
    input: PathBuf,
    /// JSON matrix of rational strings overriding the background metric
    #[arg(long)]
    metric: Option<PathBuf>,
    /// JSON array of rational tuples overriding the sample points
    #[arg(long)]
    samples: Option<PathBuf>,
    /// Append a human-readable table after the JSON report
    #[arg(long)]
    pretty: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Analyze a (1,1) tensor field (nilpotent or complex-diagonalizable)
    #[command(name = "analyze-11")]
    Analyze11(AnalyzeArgs),
    /// Analyze an antisymmetric (0,q) tensor field
    #[command(name = "analyze-form")]
    AnalyzeForm(AnalyzeArgs),
    /// Analyze a constant-rank symmetric (0,2) tensor field
    #[command(name = "analyze-sym02")]
    AnalyzeSym02(AnalyzeArgs),
    /// Analyze a constant-rank symmetric (2,0) tensor field
    #[command(name = "analyze-sym20")]
    AnalyzeSym20(AnalyzeArgs),
    /// Analyze a constant-rank bivector field
    #[command(name = "analyze-bivector")]
    AnalyzeBivector(AnalyzeArgs),
    /// Check a Lie-algebra bracket table against the frame conditions
    #[command(name = "lie-check")]
    LieCheck(AnalyzeArgs),
    /// Build one of the explicit generators
    Construct {
        #[command(subcommand)]
        what: ConstructCmd,
    },
    /// Decide whether a Jordan profile is controlled by the Nijenhuis tensor
    #[command(name = "verify-controlled")]
    VerifyControlled {
        /// Profile as a space-separated weakly decreasing string, e.g. "4 2 1"
        #[arg(long)]
        profile: String,
        /// Dimension cap for the certification
        #[arg(long = "n-cap", default_value_t = 8)]
        n_cap: usize,
        #[arg(long)]
        pretty: bool,
    },
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Three-orbit algebra with vanishing Nijenhuis tensor and a
    /// non-involutive kernel at the shortest block length
    Prop81 {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        pretty: bool,
    },
    /// Square-zero tensor over a distribution document
    AffineTangent {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        pretty: bool,
    },
    /// Closed but non-integrable q-form
    NinForm {
        #[arg(long)]
        n: usize,
        #[arg(long = "q-degree")]
        q_degree: usize,
        #[arg(long)]
        pretty: bool,
    },
    /// Zero-padded leafwise-parallel extension
    ProductExtension {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        pretty: bool,
    },
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(vec![format!("cannot read {}: {e}", path.display())]))
}

/// Splices `--metric` / `--samples` overrides into the raw document before
/// validation so the merged result is checked as a whole.
fn load_spec(args: &AnalyzeArgs) -> Result<analysis::AnalysisSpec, Error> {
    let text = read(&args.input)?;
    let mut doc: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("not valid JSON: {e}")))?;
    if let Some(path) = &args.samples {
        let samples: serde_json::Value = serde_json::from_str(&read(path)?)
            .map_err(|e| Error::Parse(format!("samples file: {e}")))?;
        doc["sample_points"] = samples;
    }
    if let Some(path) = &args.metric {
        let metric: serde_json::Value = serde_json::from_str(&read(path)?)
            .map_err(|e| Error::Parse(format!("metric file: {e}")))?;
        doc["options"]["metric"] = metric;
    }
    analysis::parse_spec(&doc.to_string())
}

fn emit(report: &Report, pretty: bool) {
    println!("{}", report.to_json());
    if pretty {
        print!("{}", analysis::render_pretty(report));
    }
}

fn dispatch(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Cmd::Analyze11(args) => analyze(args, AnalysisCommand::Analyze11),
        Cmd::AnalyzeForm(args) => analyze(args, AnalysisCommand::AnalyzeForm),
        Cmd::AnalyzeSym02(args) => analyze(args, AnalysisCommand::AnalyzeSym02),
        Cmd::AnalyzeSym20(args) => analyze(args, AnalysisCommand::AnalyzeSym20),
        Cmd::AnalyzeBivector(args) => analyze(args, AnalysisCommand::AnalyzeBivector),
        Cmd::LieCheck(args) => analyze(args, AnalysisCommand::LieCheck),
        Cmd::Construct { what } => match what {
            ConstructCmd::Prop81 { p, q, r, pretty } => {
                emit(&analysis::construct_prop81(p, q, r)?, pretty);
                Ok(())
            }
            ConstructCmd::AffineTangent { input, pretty } => {
                emit(&analysis::construct_affine_tangent(&read(&input)?)?, pretty);
                Ok(())
            }
            ConstructCmd::NinForm {
                n,
                q_degree,
                pretty,
            } => {
                emit(&analysis::construct_nin_form(n, q_degree)?, pretty);
                Ok(())
            }
            ConstructCmd::ProductExtension { input, pretty } => {
                emit(
                    &analysis::construct_product_extension(&read(&input)?)?,
                    pretty,
                );
                Ok(())
            }
        },
        Cmd::VerifyControlled {
            profile,
            n_cap,
            pretty,
        } => {
            emit(&analysis::verify_controlled(&profile, n_cap)?, pretty);
            Ok(())
        }
    }
}

fn analyze(args: AnalyzeArgs, command: AnalysisCommand) -> Result<(), Error> {
    let spec = load_spec(&args)?;
    let report = analysis::run_command(&spec, command)?;
    emit(&report, args.pretty);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Unsupported(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
