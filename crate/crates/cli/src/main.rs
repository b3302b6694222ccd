mod cubulate;
mod handles;
mod output;
mod verify;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "multisect", version, about = "Multisections of odd-dimensional tori")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run verification suites for T^(2k-1).
    Verify(verify::VerifyArgs),
    /// Emit the ordered handle table of an intersection X_I.
    Handles(handles::HandlesArgs),
    /// Validate a directed cube complex and lift the multisection to it.
    Cubulate(cubulate::CubulateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

/// A problem with the request itself rather than with the mathematics.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_error(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

pub fn read_file(path: &PathBuf) -> anyhow::Result<String> {
    std::fs::read_to_string(path).map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(value) = std::env::var("MULTISECT_THREADS") {
        let threads: usize = value
            .trim()
            .parse()
            .ok()
            .filter(|&t| t > 0)
            .ok_or_else(|| config_error(format!("MULTISECT_THREADS must be a positive integer, got `{value}`")))?;
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    configure_threads()?;
    match cli.command {
        Command::Verify(args) => verify::run(args),
        Command::Handles(args) => handles::run(args),
        Command::Cubulate(args) => cubulate::run(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.is::<ConfigError>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// Library errors about the request become configuration errors.
pub fn library_error(e: multisect::Error) -> anyhow::Error {
    use multisect::Error as E;
    match e {
        E::InvalidParams(_) | E::InvalidIndexSet(_) | E::Unsupported(_) | E::UnknownGolden(_) => config_error(e.to_string()),
        other => other.into(),
    }
}
