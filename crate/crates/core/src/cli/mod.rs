//! Command-line front end: `solve`, `converge`, `oracle-check` and `sweep`
//! over a JSON experiment configuration.

mod commands;
mod config;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{
    oracle_configurations, report_table, run_converge, run_oracle_check, run_solve, run_sweep,
    Outcome, CONVERGE_STUDIES, PER_MODE_COLUMNS,
};
pub use config::{
    ExperimentConfig, GeometryConfig, OracleConfig, SplitConfig, Tolerances, ValidatedConfig,
};
pub use output::{fmt17, write_json, OutputDir, Table};

use crate::error::{Error, Result};
use crate::exec::ExecPolicy;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_RESONANCE: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "thinlayer",
    version,
    about = "Thin-layer transmission problems on concentric circles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve every mode and write coefficient tables and sampled profiles.
    Solve(CommonArgs),
    /// Run the convergence studies over the thickness ladder.
    Converge(CommonArgs),
    /// Compare the closed-form solvers with the finite-volume oracle.
    OracleCheck(CommonArgs),
    /// Tabulate the boundary symbol over the ladder and flag resonant modes.
    Sweep(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// JSON experiment configuration.
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Output directory [default: ./out, or `output_dir` from the config].
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Comma-separated modes, e.g. `cos0,cos2,sin3`.
    #[arg(long, value_delimiter = ',')]
    pub modes: Option<Vec<String>>,
    /// Comma-separated, strictly decreasing layer thicknesses.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub delta_ladder: Option<Vec<f64>>,
    /// Exit with status 3 when a slope or order leaves its band.
    #[arg(long)]
    pub strict: bool,
    /// Evaluate the ladder on one thread.
    #[arg(long)]
    pub sequential: bool,
}

impl CommonArgs {
    fn load(&self) -> Result<ValidatedConfig> {
        let mut raw = ExperimentConfig::load(&self.config)?;
        if let Some(modes) = &self.modes {
            raw.modes = modes.clone();
        }
        if let Some(ladder) = &self.delta_ladder {
            raw.delta_ladder = ladder.clone();
        }
        raw.validate()
    }

    fn policy(&self) -> ExecPolicy {
        if self.sequential {
            ExecPolicy::Sequential
        } else {
            ExecPolicy::Parallel
        }
    }
}

pub fn exit_code(error: &Error) -> i32 {
    match error {
        Error::ResonantMode { .. } => EXIT_RESONANCE,
        _ => EXIT_VALIDATION,
    }
}

/// Runs a parsed command and returns the process exit status.
pub fn run(cli: &Cli) -> i32 {
    let (Command::Solve(args)
    | Command::Converge(args)
    | Command::OracleCheck(args)
    | Command::Sweep(args)) = &cli.command;
    let result = args.load().and_then(|cfg| {
        let dir = args
            .out
            .clone()
            .or_else(|| cfg.output_dir.clone())
            .unwrap_or_else(|| PathBuf::from("out"));
        let mut out = OutputDir::create(&dir)?;
        match &cli.command {
            Command::Solve(_) => run_solve(&cfg, &mut out),
            Command::Converge(a) => run_converge(&cfg, &mut out, a.strict, a.policy()),
            Command::OracleCheck(a) => run_oracle_check(&cfg, &mut out, a.strict, a.policy()),
            Command::Sweep(_) => run_sweep(&cfg, &mut out),
        }
    });
    match result {
        Ok(Outcome::Ok) => EXIT_OK,
        Ok(Outcome::ToleranceBreach) => {
            eprintln!("error: tolerance band breached");
            EXIT_TOLERANCE
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Parses `args` (program name first) and runs.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_VALIDATION
            } else {
                EXIT_OK
            }
        }
    }
}
