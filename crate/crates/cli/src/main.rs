use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use aidapub_core::clustering::ClusterParams;
use aidapub_core::extraction::ReportFormat;
use aidapub_core::nanopub::Iri;
use chrono::{DateTime, Utc};
use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser)]
#[command(name = "aidapub", version, about = "AIDA sentences and nanopublications from the command line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the AIDA URI of a sentence.
    Encode { text: String },
    /// Print the sentence behind an AIDA URI.
    Decode { uri: String },
    /// Judge sentences, one per input line, and print a TSV verdict per line.
    Validate {
        #[arg(long)]
        rules: Option<PathBuf>,
        /// Read from this file instead of standard input.
        input: Option<PathBuf>,
    },
    /// Turn a GeneRIF file into AIDA nanopublications.
    Extract(ExtractArgs),
    /// Propose related sentences and publish them as relation nanopublications.
    Cluster(ClusterArgs),
    /// Run the portal HTTP service.
    Serve {
        #[arg(long, env = "AIDAPUB_LISTEN", default_value = "127.0.0.1:8080")]
        listen: SocketAddr,
        /// Append-only store; kept in memory only when absent.
        #[arg(long, env = "AIDAPUB_JOURNAL")]
        journal: Option<PathBuf>,
        #[arg(long)]
        rules: Option<PathBuf>,
    },
    /// Send TriG files to a running portal.
    Publish {
        #[arg(long, env = "AIDAPUB_SERVER", default_value = "http://127.0.0.1:8080")]
        server: String,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

#[derive(Args)]
struct Stamp {
    /// Agent the output is attributed to.
    #[arg(long, value_parser = parse_iri)]
    agent: Option<Iri>,
    /// Generation time recorded in provenance. Defaults to SOURCE_DATE_EPOCH,
    /// then to the current time.
    #[arg(long, value_parser = parse_time)]
    timestamp: Option<DateTime<Utc>>,
}

#[derive(Args)]
struct ExtractArgs {
    /// GeneRIF TSV, plain or gzip-compressed.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    rules: Option<PathBuf>,
    /// TriG output; `-` for standard output.
    #[arg(long)]
    out: PathBuf,
    /// Category distribution; CSV when the name ends in `.csv`.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    report_format: Option<ReportFormat>,
    #[command(flatten)]
    stamp: Stamp,
}

#[derive(Clone, Copy, ValueEnum)]
enum CorpusFormat {
    Trig,
    Lines,
}

#[derive(Args)]
struct ClusterArgs {
    /// Nanopublications (TriG) or one sentence per line.
    #[arg(long)]
    input: PathBuf,
    /// Guessed from the file extension when absent.
    #[arg(long, value_enum)]
    format: Option<CorpusFormat>,
    #[arg(long, env = "AIDAPUB_N1", default_value_t = ClusterParams::default().n1)]
    n1: usize,
    #[arg(long, env = "AIDAPUB_N2", default_value_t = ClusterParams::default().n2)]
    n2: usize,
    #[arg(long, env = "AIDAPUB_K", default_value_t = ClusterParams::default().k)]
    k: usize,
    #[arg(long, env = "AIDAPUB_REPS", default_value_t = ClusterParams::default().repetitions)]
    reps: usize,
    #[arg(long, env = "AIDAPUB_TAU", default_value_t = ClusterParams::default().tau)]
    tau: f64,
    #[arg(long, env = "AIDAPUB_QUORUM", default_value_t = ClusterParams::default().quorum)]
    quorum: f64,
    #[arg(long, env = "AIDAPUB_SEED", default_value_t = ClusterParams::default().seed)]
    seed: u64,
    /// Relation nanopublications (TriG); `-` for standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// One row per cluster member.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[command(flatten)]
    stamp: Stamp,
}

impl ClusterArgs {
    fn params(&self) -> ClusterParams {
        ClusterParams {
            n1: self.n1,
            n2: self.n2,
            k: self.k,
            repetitions: self.reps,
            tau: self.tau,
            quorum: self.quorum,
            seed: self.seed,
        }
    }
}

fn parse_iri(s: &str) -> Result<Iri, String> {
    Iri::new(s).map_err(|e| e.to_string())
}

fn parse_time(s: &str) -> Result<DateTime<Utc>, String> {
    DateTime::parse_from_rfc3339(s).map(|d| d.with_timezone(&Utc)).map_err(|e| format!("{e} (expected RFC 3339)"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let level = std::env::var("AIDAPUB_LOG").unwrap_or_else(|_| "warn".into());
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::new(level))
        .with_writer(std::io::stderr)
        .init();
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
