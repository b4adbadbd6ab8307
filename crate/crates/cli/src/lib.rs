//! The `coarsetop` command line.
//!
//! [`run`] does all the work and returns what would be printed, so tests can
//! drive it in-process. Exit codes: 0 pass, 2 input error, 3 property
//! falsified, 4 inconclusive.

pub mod check;
pub mod commands;
pub mod doc;
pub mod report;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use coarsetop::asymptotic::OscConfig;

use report::{Report, EXIT_INPUT};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_ARTIFACT: &str = "coarsetop-report.json";

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Prebornology,
    Coarse,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Prebornology => "prebornology",
            Kind::Coarse => "coarse",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "coarsetop", version, about = "Finite bornological and coarse spaces, checked two ways")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "table")]
    pub format: Format,
    /// Where the JSON report artifact is written (and read by `report`).
    #[arg(long, global = true, default_value = DEFAULT_ARTIFACT)]
    pub artifact: PathBuf,
    /// Do not write the artifact.
    #[arg(long, global = true)]
    pub no_artifact: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a space description file and run its checks.
    Check { file: PathBuf },
    /// Count prebornologies or coarse structures on small carriers.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Run round trips and cross-checks on every instance.
        #[arg(long)]
        verify: bool,
    },
    /// Compare definition-side and characterisation-side verdicts on random spaces.
    Oracle {
        #[arg(long)]
        trials: u64,
        #[arg(long, env = "COARSETOP_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Estimate the oscillation of a function on the integers.
    Oscillate {
        #[arg(long)]
        expr: String,
        /// `1..10` or a list such as `1,2,5`.
        #[arg(long, default_value = "1..10")]
        widths: String,
        /// `1e1:1e6` (decades) or a list such as `10,100,1000`.
        #[arg(long, default_value = "1e1:1e6")]
        radii: String,
        #[arg(long, default_value_t = 2048)]
        samples: usize,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        #[arg(long, env = "COARSETOP_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Render the last report artifact.
    Report,
}

/// What a run prints and how it exits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn input_error(message: impl std::fmt::Display) -> Self {
        Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Table => report.render_table(),
        Format::Json => report.to_json(),
    }
}

fn finish(report: Report, cli: &Cli, started: Instant) -> Outcome {
    let mut stderr = String::new();
    if !cli.no_artifact {
        if let Err(e) = std::fs::write(&cli.artifact, report.to_json()) {
            return Outcome::input_error(format!("cannot write {}: {e}", cli.artifact.display()));
        }
    }
    stderr.push_str(&format!("wall time: {:.2} s\n", started.elapsed().as_secs_f64()));
    Outcome { code: report.exit_code, stdout: render(&report, cli.format), stderr }
}

fn read_report(path: &Path) -> Result<Report, String> {
    let text =
        std::fs::read_to_string(path).map_err(|e| format!("cannot read report artifact {}: {e}", path.display()))?;
    Report::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: text },
            };
        }
    };
    let started = Instant::now();
    let report = match &cli.command {
        Command::Check { file } => {
            let text = match std::fs::read_to_string(file) {
                Ok(t) => t,
                Err(e) => return Outcome::input_error(format!("cannot read {}: {e}", file.display())),
            };
            check::run(&text, &file.display().to_string()).map_err(|e| format!("{}: {e}", file.display()))
        }
        Command::Enumerate { n, kind, verify } => commands::enumerate(*n, *kind, *verify),
        Command::Oracle { trials, seed } => commands::oracle(*trials, *seed),
        Command::Oscillate { expr, widths, radii, samples, tol, seed } => (|| {
            let cfg = OscConfig {
                widths: commands::parse_widths(widths)?,
                radii: commands::parse_radii(radii)?,
                samples: *samples,
                tol: *tol,
                seed: *seed,
            };
            commands::oscillate(expr, cfg).map_err(|e| commands::oscillation_error(expr, &e))
        })(),
        Command::Report => {
            return match read_report(&cli.artifact) {
                Ok(r) => Outcome { code: 0, stdout: render(&r, cli.format), stderr: String::new() },
                Err(e) => Outcome::input_error(e),
            };
        }
    };
    match report {
        Ok(r) => finish(r, &cli, started),
        Err(e) => Outcome::input_error(e),
    }
}
