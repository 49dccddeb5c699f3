//! Command-line surface.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use fairshare_core::DEFAULT_EXACT_CAP;

use crate::empirical::{empirical, parse_window, EmpiricalReport, RevenueTable, DEFAULT_ENTITY};
use crate::error::{CliError, EXIT_OK, EXIT_VALIDATION};
use crate::report::{emit, render_empirical, render_solve, render_sweep, render_violations, Format};
use crate::scenario::{parse_scenario, MethodChoice, Scenario};
use crate::solve::{solve, SolveOptions};
use crate::sweep::{parse_n_values, sweep};

#[derive(Debug, Parser)]
#[command(name = "fairshare", version, about = "Shapley allocations for crowd-sourced systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Allocate a scenario's value among its players.
    Solve(SolveArgs),
    /// Founder share across crowd sizes.
    Sweep(SweepArgs),
    /// Payout share from revenue records, checked against [1/2, 2/3].
    Empirical(EmpiricalArgs),
    /// Check a scenario file and list every problem.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Write here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    /// Overrides the scenario's method.
    #[arg(long, value_enum)]
    pub method: Option<MethodChoice>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub permutations: Option<usize>,
    /// Largest roster the exact engine accepts.
    #[arg(long, env = "FAIRSHARE_EXACT_CAP", default_value_t = DEFAULT_EXACT_CAP)]
    pub exact_cap: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    /// Crowd sizes, e.g. `10,100,1000` or `1..50`.
    #[arg(long)]
    pub n_values: String,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct EmpiricalArgs {
    /// Revenue table; defaults to the bundled Alphabet/YouTube figures.
    #[arg(long)]
    pub records: Option<PathBuf>,
    #[arg(long, default_value = DEFAULT_ENTITY)]
    pub entity: String,
    /// Total payout over the window, in the table's units.
    #[arg(long)]
    pub payout: Option<f64>,
    /// Spans such as `2018H2..2021H1`.
    #[arg(long, required_unless_present = "share")]
    pub window: Option<String>,
    /// Check an already computed share instead.
    #[arg(long, conflicts_with_all = ["records", "payout", "window"])]
    pub share: Option<f64>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn load_scenario(path: &Path) -> Result<Scenario, CliError> {
    parse_scenario(&read(path)?)
}

/// Runs a command and returns the process exit code.
pub fn run(cli: &Cli) -> Result<i32, CliError> {
    match &cli.command {
        Command::Solve(a) => {
            let scenario = load_scenario(&a.scenario)?;
            let opts = SolveOptions {
                method: a.method,
                exact_cap: a.exact_cap,
                permutations: a.permutations,
                seed: a.seed,
            };
            let report = solve(&scenario, &opts)?;
            emit(&render_solve(&report, a.output.format), a.output.out.as_deref())?;
        }
        Command::Sweep(a) => {
            let scenario = load_scenario(&a.scenario)?;
            let report = sweep(&scenario, &parse_n_values(&a.n_values)?)?;
            emit(&render_sweep(&report, a.output.format), a.output.out.as_deref())?;
        }
        Command::Empirical(a) => {
            let report = match (a.share, &a.window) {
                (Some(share), _) => EmpiricalReport::from_share(share)?,
                (None, Some(window)) => {
                    let table = match &a.records {
                        Some(p) => RevenueTable::parse(&read(p)?)?,
                        None => RevenueTable::bundled(),
                    };
                    empirical(&table, &a.entity, a.payout, &parse_window(window)?)?
                }
                (None, None) => return Err(CliError::Usage("give --window or --share".into())),
            };
            emit(&render_empirical(&report, a.output.format), a.output.out.as_deref())?;
        }
        Command::Validate(a) => {
            return match load_scenario(&a.scenario) {
                Ok(s) => {
                    let text = match a.format {
                        Format::Text => format!("{}: valid {} scenario\n", a.scenario.display(), s.model().as_str()),
                        f => render_violations(&[], f),
                    };
                    emit(&text, None)?;
                    Ok(EXIT_OK)
                }
                Err(CliError::Validation(v)) => {
                    emit(&render_violations(&v, a.format), None)?;
                    Ok(EXIT_VALIDATION)
                }
                Err(e) => Err(e),
            };
        }
    }
    Ok(EXIT_OK)
}
