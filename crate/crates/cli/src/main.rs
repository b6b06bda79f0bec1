use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod input;
mod report;

use report::{RunReport, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderKind {
    Lex,
    Grevlex,
}

/// Exact multisymmetric polynomial algebra for the perfect cuboid equations.
#[derive(Parser, Debug)]
#[command(name = "cuboid-cas", version)]
pub struct Cli {
    /// Output format of the primary result.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the primary result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for the numeric sampler (ChaCha8).
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    /// Maximum accepted relative residual.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Maximum number of S-pair reductions.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub budget: u64,
    /// Restrict to one factor equation (F1..F8, L1, L2).
    #[arg(long, global = true)]
    pub only: Option<String>,
    /// Report per-item wall-clock time.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Re-derive the factor equations and compare with the built-in catalog.
    Derive {
        /// Write derivation traces as JSON.
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Decide membership in the cuboid ideal.
    Verify {
        /// Catalog ids or expressions.
        #[arg(allow_hyphen_values = true)]
        inputs: Vec<String>,
        /// File with one expression per line.
        #[arg(long)]
        file: Option<PathBuf>,
        /// JSON catalog as written by `derive --format json`.
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Write a multisymmetric polynomial in elementary symbols.
    Decompose {
        #[arg(allow_hyphen_values = true)]
        inputs: Vec<String>,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Evaluate the catalog on random real cuboids.
    CheckNumeric,
    /// Reduced Gröbner basis of the generators in FILE.
    Groebner {
        file: PathBuf,
        /// Variables, most significant first (default: order of appearance).
        #[arg(long, value_delimiter = ',')]
        vars: Vec<String>,
        #[arg(long, value_enum, default_value_t = OrderKind::Grevlex)]
        order: OrderKind,
        /// Variables to eliminate; prints only elements free of them.
        #[arg(long, value_delimiter = ',')]
        eliminate: Vec<String>,
    },
}

/// Failure before a report could be produced.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_SYMMETRY: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_PARSE,
            message: message.into(),
        }
    }
}

pub struct Outcome {
    pub payload: String,
    pub report: RunReport,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Derive { trace_out } => commands::derive(&cli, trace_out.as_deref()),
        Command::Verify {
            inputs,
            file,
            catalog,
        } => commands::verify(&cli, inputs, file.as_deref(), catalog.as_deref()),
        Command::Decompose { inputs, file } => commands::decompose(&cli, inputs, file.as_deref()),
        Command::CheckNumeric => commands::check_numeric(&cli),
        Command::Groebner {
            file,
            vars,
            order,
            eliminate,
        } => commands::groebner(&cli, file, vars, *order, eliminate),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {}", e.message);
            return ExitCode::from(e.code);
        }
    };
    if let Err(e) = report::emit(&cli.out, &outcome.payload) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_PARSE);
    }
    match cli.format {
        Format::Text => eprint!("{}", outcome.report.text_summary()),
        Format::Json => eprintln!(
            "{}",
            serde_json::to_string_pretty(&outcome.report).expect("report serializes")
        ),
    }
    ExitCode::from(match outcome.report.status {
        Status::Ok => 0,
        Status::Failed => EXIT_MISMATCH,
        Status::BudgetExceeded => EXIT_BUDGET,
    })
}
