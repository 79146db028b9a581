//! `elsperm`: section analysis, ELS permutations, interlock tests, parameter
//! space counting and partitioned exhaustive search.

mod commands;
mod input;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use input::Output;

#[derive(Parser, Debug)]
#[command(name = "elsperm", version, about = "Equidistant-letter-sequence permutations and search")]
struct Cli {
    /// Print the configuration banner and summaries on stderr so stdout carries data only.
    #[arg(long, short, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Section lengths, their prime factors and candidate layouts.
    Analyze(commands::AnalyzeArgs),
    /// Apply one or more permutation passes and print the result.
    Permute(commands::PermuteArgs),
    /// Topological or directional interlock test of one layout and key.
    Interlock(commands::InterlockArgs),
    /// Size of a parameter space at a recursion level.
    Count(commands::CountArgs),
    /// Enumerate, score and filter a rank range of the parameter space.
    Search(commands::SearchArgs),
    /// Re-apply records' row choices to another text of the same row count.
    Promote(commands::PromoteArgs),
    /// Train a character n-gram model and save it as a table.
    TrainNgram(commands::TrainArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = Output::new(cli.quiet);
    let result = match cli.command {
        Command::Analyze(a) => commands::analyze(a, &out),
        Command::Permute(a) => commands::permute(a, &out),
        Command::Interlock(a) => commands::interlock(a, &out),
        Command::Count(a) => commands::count(a, &out),
        Command::Search(a) => commands::search(a, &out),
        Command::Promote(a) => commands::promote_cmd(a, &out),
        Command::TrainNgram(a) => commands::train(a, &out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        // reader went away, e.g. `| head`
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain()
        .filter_map(|c| c.downcast_ref::<std::io::Error>())
        .any(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
}
