//! `superder`: checks, decomposes and enumerates Jordan superderivations on
//! finite graded rings described in JSON.
//!
//! Exit status: 0 when everything checked passes, 1 on a mathematical failure
//! (the report carries a witness), 2 on unusable input.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "superder", version, about)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Worker threads for checks and enumeration (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Largest ring order and candidate count that will be attempted.
    #[arg(long, default_value_t = superder::DEFAULT_BOUND, global = true)]
    bound: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Orders, grading parts, torsion and faithfulness of a configured ring.
    Describe { config: PathBuf },
    /// Checks one map against an axiom.
    Verify {
        config: PathBuf,
        /// Map file, or `@name` for a map in the configuration.
        map: String,
        #[arg(long, value_enum)]
        axiom: commands::Axiom,
        /// Check this many random tuples instead of all of them.
        #[arg(long)]
        sample: Option<usize>,
        /// Seed for `--sample`.
        #[arg(long, default_value_t = 0, requires = "sample")]
        seed: u64,
    },
    /// Splits Jordan superderivations or a super-biderivation into components.
    Decompose {
        config: PathBuf,
        /// One or two graded maps (degrees 0 and 1), or one biadditive map.
        #[arg(required = true, num_args = 1..=2)]
        maps: Vec<String>,
    },
    /// Lists every map of a class by exhaustive search.
    Enumerate {
        config: PathBuf,
        #[arg(long, value_enum)]
        class: commands::Class,
    },
    /// Runs the acceptance criteria on a matrix of rings.
    Suite {
        /// `default` or a matrix file.
        #[arg(long, default_value = "default")]
        matrix: String,
        /// Mutations per matrix entry.
        #[arg(long, default_value_t = 100)]
        mutations: usize,
        #[arg(long, default_value_t = superder::suite::SuiteConfig::default().seed)]
        seed: u64,
    },
}

/// Why a command could not produce a normal report.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    /// A map or structure fails an identity; the payload carries the witness.
    Math(superder::Error),
}

impl From<superder::Error> for CliError {
    fn from(e: superder::Error) -> Self {
        match e {
            superder::Error::Axiom { .. } | superder::Error::BlockViolation { .. } => {
                CliError::Math(e)
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

/// A finished command: its report and whether everything passed.
pub struct Report {
    pub json: serde_json::Value,
    pub text: String,
    pub passed: bool,
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let bound = cli.bound;
    match &cli.command {
        Command::Describe { config } => commands::describe(&config::load_config(config, bound)?),
        Command::Verify {
            config,
            map,
            axiom,
            sample,
            seed,
        } => {
            let cfg = config::load_config(config, bound)?;
            let m = config::load_map(map, &cfg)?;
            commands::verify(&cfg, &m, *axiom, sample.map(|n| (n, *seed)))
        }
        Command::Decompose { config, maps } => {
            let cfg = config::load_config(config, bound)?;
            let loaded = maps
                .iter()
                .map(|m| config::load_map(m, &cfg))
                .collect::<Result<Vec<_>, _>>()?;
            commands::decompose(&cfg, &loaded, bound)
        }
        Command::Enumerate { config, class } => {
            commands::enumerate(&config::load_config(config, bound)?, *class, bound)
        }
        Command::Suite {
            matrix,
            mutations,
            seed,
        } => {
            let entries = if matrix == "default" {
                superder::suite::default_matrix()?
            } else {
                config::load_matrix(&PathBuf::from(matrix))?
            };
            let cfg = superder::suite::SuiteConfig {
                bound,
                seed: *seed,
                mutations: *mutations,
                ..Default::default()
            };
            Ok(commands::suite(&entries, &cfg))
        }
    }
}

fn emit(format: Format, json: &serde_json::Value, text: &str) {
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(json).expect("json value")
        ),
        Format::Text => print!("{text}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: cannot start {n} workers: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(report) => {
            emit(cli.format, &report.json, &report.text);
            ExitCode::from(if report.passed { 0 } else { 1 })
        }
        Err(CliError::Math(e)) => {
            let json = match &e {
                superder::Error::Axiom { law, witness } => json!({
                    "schema_version": superder::suite::SCHEMA_VERSION,
                    "verdict": "fail",
                    "law": law,
                    "witness": witness,
                }),
                other => json!({
                    "schema_version": superder::suite::SCHEMA_VERSION,
                    "verdict": "fail",
                    "error": other.to_string(),
                }),
            };
            emit(cli.format, &json, &format!("FAIL: {e}\n"));
            ExitCode::from(1)
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
