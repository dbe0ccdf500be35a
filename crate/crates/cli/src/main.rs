//! `acir`: rank, match, emit and benchmark action-language sources.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "acir", version, about = "Semantic matching of queries against action-language sources")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum StageArg {
    Expansion,
    C1,
    C2,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Score every source of a directory against a query and sort them.
    Rank {
        #[arg(long)]
        query: PathBuf,
        #[arg(long)]
        sources: PathBuf,
        #[arg(long)]
        max_budget: Option<usize>,
        #[arg(long, env = "ACIR_JOBS")]
        jobs: Option<usize>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Match a query against a single source.
    Match {
        #[arg(long)]
        query: PathBuf,
        #[arg(long)]
        source: PathBuf,
        /// Print the witness and its path state by state.
        #[arg(long)]
        explain: bool,
        /// Write the witness path as a Graphviz digraph.
        #[arg(long, value_name = "PATH")]
        emit_dot: Option<PathBuf>,
        #[arg(long)]
        max_budget: Option<usize>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Write the logic program queried at a stage of the match search.
    EmitAsp {
        #[arg(long)]
        source: PathBuf,
        #[arg(long, value_enum, default_value = "expansion")]
        stage: StageArg,
        /// Take the stage arguments from the witness for this query.
        #[arg(long)]
        query: Option<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Generate a seeded benchmark, time the search and write a CSV report.
    Bench {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(3..=10))]
        steps: u64,
        #[arg(long, default_value_t = 20)]
        instances: usize,
        #[arg(long, default_value_t = 6)]
        fluents: usize,
        #[arg(long, default_value_t = 3)]
        concurrency: usize,
        #[arg(long, default_value_t = 0)]
        u_actions: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Parse and check sources, including for emergent non-determinism.
    Validate {
        #[arg(required = true)]
        sources: Vec<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Rank { query, sources, max_budget, jobs, format } => {
            commands::rank(&query, &sources, max_budget, jobs, format)
        }
        Command::Match { query, source, explain, emit_dot, max_budget, format } => {
            commands::match_one(&query, &source, explain, emit_dot.as_deref(), max_budget, format)
        }
        Command::EmitAsp { source, stage, query, output } => {
            commands::emit_asp(&source, stage, query.as_deref(), &output)
        }
        Command::Bench { seed, steps, instances, fluents, concurrency, u_actions, output } => {
            let cfg = acir_core::bench::BenchmarkConfig {
                fluents,
                steps: steps as usize,
                concurrency,
                u_actions,
                instances,
                seed,
            };
            commands::bench(&cfg, &output)
        }
        Command::Validate { sources } => commands::validate(&sources),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            error::emit(&CliError::Usage(e.render().to_string().trim_end().to_string()));
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            error::emit(&e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
