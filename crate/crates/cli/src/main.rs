//! `hshadow`: shadowing runs, certificates, conjugacies and coding from the command line.
//!
//! Exit codes: 0 success, 1 input error, 2 stage budget or window exhausted, 3 certificate failure.

mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use hshadow::Error;

#[derive(Parser)]
#[command(name = "hshadow", version, about = "Homotopy pseudo-orbit shadowing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Shadow a homotopy pseudo-orbit by a genuine orbit.
    Shadow(Opts),
    /// Certificate margins, degree, expansion factor and classification of a system.
    Check(Opts),
    /// Image of an orbit under a built-in homotopy semi-conjugacy.
    Conjugate(Opts),
    /// Symbolic itinerary of the orbit shadowing the input.
    Code(Opts),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Homotopy {
    Identity,
    HalfRotation,
    AssociatedH,
    AssociatedK,
}

#[derive(Args, Clone, Debug)]
pub struct Opts {
    /// System description (JSON).
    #[arg(long)]
    pub system: PathBuf,
    /// Target system for `conjugate`; defaults to `--system`.
    #[arg(long)]
    pub system2: Option<PathBuf>,
    /// Orbit or pseudo-orbit file (JSON, or CSV by extension).
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Window half-width N: `[-N, N]` for Hénon systems, `[0, N]` otherwise.
    #[arg(long)]
    pub window: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, value_enum)]
    pub homotopy: Option<Homotopy>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Input(_)
        | Error::Domain { .. }
        | Error::EndpointMismatch { .. }
        | Error::Unsupported(_) => 1,
        Error::Budget { .. } | Error::WindowTooSmall { .. } | Error::Numerical(_) => 2,
        Error::Certificate(_) => 3,
    }
}

fn set_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("SHADOW_THREADS") else {
        return Ok(());
    };
    match v.trim().parse::<usize>() {
        Ok(n) if n > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string()),
        _ => Err(format!(
            "SHADOW_THREADS must be a positive integer, got {v:?}"
        )),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    if let Err(msg) = set_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }
    let result = match &cli.command {
        Command::Shadow(o) => run::shadow(o),
        Command::Check(o) => run::check(o),
        Command::Conjugate(o) => run::conjugate(o),
        Command::Code(o) => run::code(o),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
