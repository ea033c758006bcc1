//! `altbase`: alternate-base expansions, invariant densities and digit-set
//! comparisons from the command line.
//!
//! Exit codes: 0 success, 2 parse error, 3 domain error, 4 numerical failure,
//! 5 search space too large, 1 i/o failure.

mod commands;
mod error;
mod expr;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{
    BaseOnlyArgs, DensityArgs, ExpandArgs, FreqArgs, GraphArgs, MeasureArgs, OrbitArgs, Report,
};
use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "altbase", version, about = "Greedy and lazy expansions in alternate bases")]
struct Cli {
    /// Print the result as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized estimates.
    #[arg(long, global = true, env = "ALTBASE_SEED", default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Greedy or lazy digits of a point.
    Expand(ExpandArgs),
    /// Invariant density of one slot.
    Density(DensityArgs),
    /// Invariant measure of an interval in one slot.
    Measure(MeasureArgs),
    /// Asymptotic frequency of a digit.
    Freq(FreqArgs),
    /// Entropy of the greedy transformation.
    Entropy(BaseOnlyArgs),
    /// Where the blocked alternate-base map and the digit-set map differ.
    Compare(BaseOnlyArgs),
    /// Trajectory of a point.
    Orbit(OrbitArgs),
    /// Sampled graphs of the transformations.
    Graph(GraphArgs),
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Expand(a) => commands::expand(a),
        Command::Density(a) => commands::density(a),
        Command::Measure(a) => commands::measure(a),
        Command::Freq(a) => commands::freq(a, cli.seed),
        Command::Entropy(a) => commands::entropy_cmd(a),
        Command::Compare(a) => commands::compare(a),
        Command::Orbit(a) => commands::orbit(a),
        Command::Graph(a) => commands::graph(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.json.to_json());
            } else {
                print!("{}", report.text);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
