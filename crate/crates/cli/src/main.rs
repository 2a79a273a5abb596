//! `reactlin`: radial/tangential analysis of `X' = A X` from the shell.
//!
//! Matrices are given row-major as `a11 a12 a21 a22`. Negative entries are
//! accepted directly or after `--`.

mod commands;
mod output;
mod report;

use std::fmt;
use std::io::{self, IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use reactlin_core::amplification::ComplexPolicy;
use reactlin_core::{Error, Mat2};

use commands::{SweepOpts, SynthMode, TrajectoryOpts};

const EXIT_USAGE: u8 = 2;
const EXIT_INAPPLICABLE: u8 = 3;
const EXIT_NUMERIC: u8 = 4;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Usage(String),
    Io(io::Error),
    SelfCheckFailed,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Io(e) => write!(f, "i/o: {e}"),
            CliError::SelfCheckFailed => write!(f, "self-check failed; see the self_check block"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Core(Error::InvalidInput(_)) => EXIT_USAGE,
            CliError::Core(
                Error::NotReactiveAttractor(_)
                | Error::Inapplicable(_)
                | Error::FormInapplicable(_)
                | Error::UndefinedForm(_)
                | Error::NeedsNumeric,
            ) => EXIT_INAPPLICABLE,
            CliError::Core(Error::Numeric(_)) | CliError::SelfCheckFailed => EXIT_NUMERIC,
            CliError::Io(_) => 1,
        }
    }
}

#[derive(Parser)]
#[command(name = "reactlin", version, about = "Reactivity and transient amplification of planar linear systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct MatrixArg {
    /// Row-major entries a11 a12 a21 a22
    #[arg(num_args = 4, value_names = ["A11", "A12", "A21", "A22"], required = true, allow_negative_numbers = true)]
    matrix: Vec<f64>,
}

impl MatrixArg {
    fn get(&self) -> Result<Mat2, CliError> {
        let m = &self.matrix;
        Ok(Mat2::checked(m[0], m[1], m[2], m[3])?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Full JSON report: decomposition, spectra, standard forms, amplification
    Analyze {
        #[command(flatten)]
        matrix: MatrixArg,
        /// Refuse the closed form for complex eigenvalues
        #[arg(long, conflicts_with = "experimental")]
        strict: bool,
        /// Continue the closed form to complex eigenvalues, checked against the oracle
        #[arg(long)]
        experimental: bool,
        /// Re-derive rho_max under random rotations and against the numeric oracle
        #[arg(long)]
        self_check: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// CSV of R, T and the unit-circle vector field on [0, pi)
    Portrait {
        #[command(flatten)]
        matrix: MatrixArg,
        #[arg(long, default_value_t = 360)]
        n: usize,
    },
    /// CSV trajectory t, x1, x2, r, theta_unwrapped
    Trajectory {
        #[command(flatten)]
        matrix: MatrixArg,
        #[arg(long, num_args = 2, value_names = ["X1", "X2"], default_values_t = [1.0, 0.0], allow_negative_numbers = true)]
        x0: Vec<f64>,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        #[arg(long, default_value_t = 10.0)]
        t_end: f64,
        /// Rotate the coefficients at rate k (reactive attractors only)
        #[arg(long, allow_negative_numbers = true)]
        k: Option<f64>,
        /// Integrate the polar form instead of the Cartesian one
        #[arg(long)]
        polar: bool,
    },
    /// Growth/decay under rotating coefficients across a range of k
    SweepK {
        #[command(flatten)]
        matrix: MatrixArg,
        #[arg(long, allow_negative_numbers = true)]
        k_min: f64,
        #[arg(long, allow_negative_numbers = true)]
        k_max: f64,
        #[arg(long, default_value_t = 161)]
        n: usize,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        #[arg(long, default_value_t = 50.0)]
        t_end: f64,
        /// One JSON document with summary and rows instead of CSV
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        /// CSV rows on standard output (the default)
        #[arg(long)]
        csv: bool,
        /// Write the JSON summary here instead of standard error
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Build a matrix with prescribed features and verify it
    Synthesize {
        #[command(subcommand)]
        mode: SynthCommand,
    },
}

#[derive(Subcommand)]
enum SynthCommand {
    /// T-centered matrix from reactivity radius, eigenvector separation and reactivity
    Deltas {
        #[arg(long)]
        delta_r: f64,
        #[arg(long)]
        delta_t: f64,
        #[arg(long)]
        rho: f64,
    },
    /// Reactive attractor with given negative eigenvalues
    Eigenvalues {
        #[arg(long, allow_negative_numbers = true)]
        lambda1: f64,
        #[arg(long, allow_negative_numbers = true)]
        lambda2: f64,
        #[arg(long)]
        rho: f64,
    },
    /// Reactive attractor with given eigendirections (radians)
    Eigenvectors {
        #[arg(long, allow_negative_numbers = true)]
        theta1: f64,
        #[arg(long, allow_negative_numbers = true)]
        theta2: f64,
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        delta_r: Option<f64>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Analyze {
            matrix,
            strict,
            experimental,
            self_check,
            seed,
        } => {
            let policy = if strict {
                ComplexPolicy::Strict
            } else if experimental {
                ComplexPolicy::Experimental
            } else {
                ComplexPolicy::Numeric
            };
            let rep = report::analyze(&matrix.get()?, policy, self_check.then_some(seed))?;
            output::write_json(&mut out, &rep)?;
            if rep.self_check.as_ref().is_some_and(|c| !c.passed) {
                return Err(CliError::SelfCheckFailed);
            }
        }
        Command::Portrait { matrix, n } => commands::portrait(&matrix.get()?, n, &mut out)?,
        Command::Trajectory {
            matrix,
            x0,
            step,
            t_end,
            k,
            polar,
        } => {
            let opts = TrajectoryOpts {
                x0: [x0[0], x0[1]],
                step,
                t_end,
                k,
                polar,
            };
            commands::trajectory(&matrix.get()?, &opts, &mut out)?;
        }
        Command::SweepK {
            matrix,
            k_min,
            k_max,
            n,
            step,
            t_end,
            json,
            csv: _,
            summary,
        } => {
            let opts = SweepOpts {
                k_min,
                k_max,
                n,
                step,
                t_end,
                json,
            };
            let doc = commands::sweep(&matrix.get()?, &opts, &mut out)?;
            match summary {
                Some(path) => std::fs::write(path, doc)?,
                None if !json => io::stderr().write_all(&doc)?,
                None => {}
            }
        }
        Command::Synthesize { mode } => {
            let mode = match mode {
                SynthCommand::Deltas { delta_r, delta_t, rho } => SynthMode::Deltas { delta_r, delta_t, rho },
                SynthCommand::Eigenvalues { lambda1, lambda2, rho } => {
                    SynthMode::Eigenvalues { lambda1, lambda2, rho }
                }
                SynthCommand::Eigenvectors { theta1, theta2, rho, delta_r } => {
                    SynthMode::Eigenvectors { theta1, theta2, rho, delta_r }
                }
            };
            commands::synthesize(&mode, &mut out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn use_color() -> bool {
    std::env::var_os("REACTLIN_NO_COLOR").is_none() && io::stderr().is_terminal()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let label = if use_color() {
                "\x1b[31merror\x1b[0m"
            } else {
                "error"
            };
            eprintln!("{label}: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
