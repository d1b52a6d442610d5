mod commands;
mod config;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::output::{CliError, Report};

#[derive(Parser, Debug)]
#[command(name = "intmeasure", version, about = "Root measures of monic integer polynomials")]
struct Cli {
    /// Target radius for certified root disks.
    #[arg(long, global = true, default_value_t = 1e-10)]
    precision: f64,
    /// Boundary sample size for compact sets that do not specify one.
    #[arg(long, global = true, default_value_t = intmeasure::potential::DEFAULT_GRID)]
    grid: usize,
    /// Directory for report files; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output formats, comma separated.
    #[arg(long, global = true, value_delimiter = ',', default_value = "json")]
    format: Vec<Format>,
    /// Worker threads for parallel sections.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Svg,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Svg => "svg",
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact invariants, roots and root-measure functionals of a polynomial.
    Analyze {
        /// Polynomial in `t`, e.g. "t^3-3t+1".
        poly: String,
    },
    /// Explicit and Leja capacity estimates of a compact set.
    Capacity {
        /// Set as inline JSON or a path to a JSON file.
        set: String,
        #[arg(long, default_value_t = 256)]
        n: usize,
    },
    /// Discretized equilibrium measure of a compact set.
    Equilibrium {
        set: String,
        #[arg(long, default_value_t = 512)]
        n: usize,
    },
    /// Convergence of a polynomial family's root measures to a target set.
    Converge {
        /// Family as inline JSON or a path to a JSON file.
        family: String,
        /// Target set as inline JSON or a path to a JSON file.
        target: String,
    },
    /// Root-gap experiment for `t^n + (lambda^(n-1)/2) t + 2`.
    Ramsay {
        #[arg(long, default_value_t = 4)]
        lambda: u32,
        #[arg(long, default_value_t = 6)]
        start: u32,
        #[arg(long, default_value_t = 40)]
        end: u32,
    },
    /// All irreducible monic polynomials with every root in a set.
    Enumerate {
        set: String,
        #[arg(long)]
        degree: usize,
        /// Maximum number of search nodes.
        #[arg(long, default_value_t = intmeasure::families::DEFAULT_BUDGET)]
        budget: u64,
    },
    /// 1-Wasserstein distance between two measures.
    Wasserstein {
        /// Polynomial, or an atomic measure as inline JSON or a file path.
        first: String,
        second: String,
    },
    /// Run an experiment described by a JSON config file.
    Experiment { config: PathBuf },
}

pub struct Settings {
    pub precision: f64,
    pub grid: usize,
    pub formats: Vec<Format>,
    pub out: Option<PathBuf>,
}

fn validate(cli: &Cli) -> Result<Settings, CliError> {
    config::check_precision(cli.precision)?;
    config::check_grid(cli.grid)?;
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::config("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::config(e.to_string()))?;
    }
    Ok(Settings {
        precision: cli.precision,
        grid: cli.grid,
        formats: cli.format.clone(),
        out: cli.out.clone(),
    })
}

fn run(cli: Cli) -> Result<Report, CliError> {
    let mut settings = validate(&cli)?;
    match cli.command {
        Command::Analyze { poly } => commands::analyze(&settings, &poly),
        Command::Capacity { set, n } => commands::capacity(&settings, &set, n),
        Command::Equilibrium { set, n } => commands::equilibrium(&settings, &set, n),
        Command::Converge { family, target } => commands::converge(&settings, &family, &target),
        Command::Ramsay { lambda, start, end } => commands::ramsay(lambda, start, end),
        Command::Enumerate { set, degree, budget } => commands::enumerate(&settings, &set, degree, budget),
        Command::Wasserstein { first, second } => commands::wasserstein(&settings, &first, &second),
        Command::Experiment { config } => config::experiment(&mut settings, &config),
    }
    .and_then(|report| {
        output::emit(&settings, &report)?;
        Ok(report)
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(report) => match report.failure {
            None => ExitCode::SUCCESS,
            Some(f) => {
                eprintln!("{f}");
                ExitCode::from(1)
            }
        },
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
