//! Command-line driver for conductor and Euler characteristic computations.

pub mod build;
pub mod commands;
pub mod examples;
pub mod report;
pub mod schema;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::examples::Example;

/// Largest precision tried when searching for a sufficient one.
pub const MAX_PRECISION: u32 = 1024;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] conductor_core::Error),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("cannot parse {path}: {source}")]
    Json { path: String, source: serde_json::Error },
}

impl CliError {
    fn is_precision(&self) -> bool {
        matches!(self, CliError::Core(e) if e.is_precision())
    }
}

/// Rendered JSON and whether every check in it passed.
pub struct Output {
    pub json: String,
    pub pass: bool,
}

impl Output {
    pub fn json<T: Serialize>(value: &T, pass: bool) -> Result<Output, CliError> {
        let json = serde_json::to_string_pretty(value).expect("reports serialize") + "\n";
        Ok(Output { json, pass })
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "conductor-workbench",
    version,
    about = "Base change conductors of tori and Euler characteristics of lattice complexes"
)]
pub struct Cli {
    /// Number of stored pi-adic digits, overriding the input file.
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a built-in pipeline and compare with the known answers.
    Examples { name: Example },
    /// Conductor of a torus (or of Res G_m for a named extension).
    Conductor {
        file: PathBuf,
        #[arg(long)]
        torus: String,
        /// discriminant, lie-coker, artin-formula, resolution or all.
        #[arg(long, default_value = "all")]
        method: String,
    },
    /// Cohomology lengths, chi and gamma of a complex.
    Complex {
        file: PathBuf,
        #[arg(long)]
        name: String,
    },
    /// Artin conductor of a lattice under a ramification filtration.
    Artin {
        file: PathBuf,
        #[arg(long)]
        lattice: String,
        #[arg(long)]
        filtration: String,
    },
    /// Print the JSON schema of the input format.
    Schema,
}

pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn failure(message: String, code: i32) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: message,
            code,
        }
    }
}

fn execute(command: &Command, precision: u32) -> Result<Output, CliError> {
    match command {
        Command::Examples { name } => {
            let report = name.run(precision)?;
            let pass = report.pass;
            Output::json(&report, pass)
        }
        Command::Conductor { file, torus, method } => {
            let input = commands::read_input(file)?;
            commands::conductor(&commands::load(&input, precision)?, torus, method)
        }
        Command::Complex { file, name } => {
            let input = commands::read_input(file)?;
            commands::complex(&commands::load(&input, precision)?, name)
        }
        Command::Artin {
            file,
            lattice,
            filtration,
        } => {
            let input = commands::read_input(file)?;
            commands::artin(&commands::load(&input, precision)?, lattice, filtration)
        }
        Command::Schema => Ok(Output {
            json: schema::schema_json(),
            pass: true,
        }),
    }
}

fn default_precision(command: &Command) -> Result<u32, CliError> {
    match command {
        Command::Conductor { file, .. } | Command::Complex { file, .. } | Command::Artin { file, .. } => {
            Ok(commands::read_input(file)?.base.precision)
        }
        Command::Examples { .. } | Command::Schema => Ok(conductor_core::rings::series::DEFAULT_PRECISION),
    }
}

/// The least precision above `failed` at which `command` stops running out
/// of precision, if there is one below [`MAX_PRECISION`].
fn sufficient_precision(command: &Command, failed: u32) -> Option<u32> {
    let mut lo = failed;
    let mut hi = failed.max(1);
    loop {
        hi = (hi * 2).min(MAX_PRECISION);
        match execute(command, hi) {
            Err(e) if e.is_precision() => {
                if hi == MAX_PRECISION {
                    return None;
                }
                lo = hi;
            }
            _ => break,
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match execute(command, mid) {
            Err(e) if e.is_precision() => lo = mid,
            _ => hi = mid,
        }
    }
    Some(hi)
}

/// Parses arguments and runs one command. Exit codes: 0 success, 1
/// mismatch or invalid input, 2 precision exhausted.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            } else {
                Outcome::failure(text, code)
            };
        }
    };
    let precision = match cli.precision {
        Some(p) => p,
        None => match default_precision(&cli.command) {
            Ok(p) => p,
            Err(e) => return Outcome::failure(format!("error: {e}\n"), 1),
        },
    };
    match execute(&cli.command, precision) {
        Ok(out) => Outcome {
            code: if out.pass { 0 } else { 1 },
            stderr: if out.pass {
                String::new()
            } else {
                "error: computed values disagree with the expected ones\n".into()
            },
            stdout: out.json,
        },
        Err(e) if e.is_precision() => {
            let hint = match sufficient_precision(&cli.command, precision) {
                Some(n) => format!("; rerun with --precision {n} or more"),
                None => format!("; no precision up to {MAX_PRECISION} suffices"),
            };
            Outcome::failure(format!("error: {e} (precision {precision}){hint}\n"), 2)
        }
        Err(e) => Outcome::failure(format!("error: {e}\n"), 1),
    }
}
