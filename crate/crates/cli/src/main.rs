//! `mkernel`: command-line front end for `mkernel-core`.
//!
//! Every subcommand prints one JSON envelope (or a CSV table with
//! `--format csv`) on stdout and exits with 0 (ok), 1 (a check failed) or 2
//! (invalid invocation).

mod commands;
mod output;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use output::{OutputEnvelope, Status};

#[derive(Debug, Parser)]
#[command(name = "mkernel", version, about = "Exact and spectral checks for the kernel 1/2 - {1/(xy)}")]
struct Cli {
    /// Output format; csv is available for tabular results only.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Report elapsed_ms as 0 so that repeated runs are byte-identical.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Möbius values and Mertens prefix sums up to a limit.
    Mobius {
        #[arg(long)]
        limit: u64,
    },
    /// The Mertens function at a point or on 1..=L.
    Mertens(MertensArgs),
    /// K(x, y), exactly or in floating point.
    Kernel {
        /// a/b, an integer or a decimal.
        #[arg(long, allow_negative_numbers = true)]
        x: String,
        #[arg(long, allow_negative_numbers = true)]
        y: String,
        /// Evaluate in double precision.
        #[arg(long)]
        float: bool,
    },
    /// Exact identity residuals over a parameter range.
    Identity {
        #[arg(long, value_enum)]
        check: IdentityArg,
        /// Inclusive range A..B.
        #[arg(long)]
        range: String,
        /// Largest N accepted for eq12.
        #[arg(long, default_value_t = mkernel_core::identities::DEFAULT_EQ12_CAP)]
        cap: u64,
    },
    /// Exact grid L² sum of the kernel.
    L2 {
        #[arg(long)]
        grid: u64,
    },
    /// Eigenvalues of the grid discretization.
    Spectrum {
        #[arg(long)]
        grid: u64,
        #[arg(long, default_value_t = mkernel_core::spectral::DEFAULT_ZERO_THRESHOLD)]
        threshold: f64,
    },
    /// Witness points where u·K is negative definite.
    Witness {
        #[arg(long, allow_negative_numbers = true)]
        u: i64,
        /// Number of primes beyond the first.
        #[arg(long)]
        extra: usize,
        /// Lower bound for the primes (default 5·√(extra+1)).
        #[arg(long)]
        q: Option<f64>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct MertensArgs {
    /// M(x) at a real x ≥ 0.
    #[arg(long)]
    at: Option<f64>,
    /// M(1), ..., M(L).
    #[arg(long)]
    upto: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IdentityArg {
    Eq12,
    Mertens1897,
}

/// Failure to run a command; reported with status `error`.
#[derive(Debug)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        CliError { kind: "invalid-argument", message: message.into() }
    }
}

impl From<mkernel_core::Error> for CliError {
    fn from(e: mkernel_core::Error) -> Self {
        CliError { kind: e.kind(), message: e.to_string() }
    }
}

/// What a command produced.
pub struct Outcome {
    pub parameters: BTreeMap<String, Value>,
    pub results: Value,
    pub passed: bool,
    pub table: Option<output::Table>,
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Mobius { .. } => "mobius",
        Command::Mertens(_) => "mertens",
        Command::Kernel { .. } => "kernel",
        Command::Identity { .. } => "identity",
        Command::L2 { .. } => "l2",
        Command::Spectrum { .. } => "spectrum",
        Command::Witness { .. } => "witness",
    }
}

fn dispatch(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Mobius { limit } => commands::mobius(*limit),
        Command::Mertens(a) => commands::mertens(a.at, a.upto),
        Command::Kernel { x, y, float } => commands::kernel(x, y, *float),
        Command::Identity { check, range, cap } => {
            let kind = match check {
                IdentityArg::Eq12 => mkernel_core::IdentityKind::Eq12,
                IdentityArg::Mertens1897 => mkernel_core::IdentityKind::Mertens1897,
            };
            commands::identity(kind, range, *cap)
        }
        Command::L2 { grid } => commands::l2(*grid),
        Command::Spectrum { grid, threshold } => commands::spectrum(*grid, *threshold),
        Command::Witness { u, extra, q } => commands::witness(*u, *extra, *q),
    }
}

fn print_json(envelope: &OutputEnvelope) {
    println!("{}", output::to_json(envelope).expect("envelope serializes"));
}

fn error_envelope(command: &str, parameters: BTreeMap<String, Value>, err: &CliError, elapsed_ms: u64) -> OutputEnvelope {
    OutputEnvelope {
        command: command.to_string(),
        parameters,
        results: json!({ "kind": err.kind, "message": err.message }),
        status: Status::Error,
        elapsed_ms,
    }
}

fn run(argv: Vec<String>) -> Status {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return Status::Ok;
        }
        Err(e) => {
            eprint!("{e}");
            let command = argv.get(1).filter(|a| !a.starts_with('-')).cloned().unwrap_or_default();
            let err = CliError::invalid(e.kind().to_string());
            print_json(&error_envelope(&command, BTreeMap::new(), &err, 0));
            return Status::Error;
        }
    };

    let name = command_name(&cli.command);
    let start = Instant::now();
    let result = dispatch(&cli.command);
    let elapsed_ms = if cli.no_timing { 0 } else { start.elapsed().as_millis() as u64 };

    let outcome = match result {
        Ok(o) => o,
        Err(err) => {
            eprintln!("mkernel {name}: {}", err.message);
            print_json(&error_envelope(name, BTreeMap::new(), &err, elapsed_ms));
            return Status::Error;
        }
    };
    let status = Status::from_passed(outcome.passed);

    match cli.format {
        Format::Json => print_json(&OutputEnvelope {
            command: name.to_string(),
            parameters: outcome.parameters,
            results: outcome.results,
            status,
            elapsed_ms,
        }),
        Format::Csv => match &outcome.table {
            Some(table) => print!("{}", output::to_csv(table).expect("in-memory CSV")),
            None => {
                let err = CliError::invalid(format!("{name} results are not tabular; use --format json"));
                eprintln!("mkernel {name}: {}", err.message);
                print_json(&error_envelope(name, outcome.parameters, &err, elapsed_ms));
                return Status::Error;
            }
        },
    }
    if status == Status::Fail {
        eprintln!("mkernel {name}: a verification check failed");
    }
    status
}

fn main() -> ExitCode {
    let status = run(std::env::args().collect());
    ExitCode::from(status.exit_code() as u8)
}
