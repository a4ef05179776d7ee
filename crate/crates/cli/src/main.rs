//! Pipeline driver for backward-generated syllogism prompts: generate
//! prompts with gold derivations, sample model responses, score them on
//! six dimensions, compose preference pairs and report aggregates.

mod generate;
mod pairs;
mod report;
mod rows;
mod sample;
mod score;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "sorites", version, about = "Multi-step syllogism prompt pipeline")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate prompts and their gold derivations.
    Generate(generate::GenerateArgs),
    /// Sample model responses over an OpenAI-compatible chat API.
    Sample(sample::SampleArgs),
    /// Score sampled responses against gold derivations.
    Score(score::ScoreArgs),
    /// Compose preference pairs from scored responses.
    Pairs(pairs::PairsArgs),
    /// Aggregate scores overall and by level, noise count and question type.
    Report(report::ReportArgs),
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Generate(args) => generate::run(args),
        Command::Sample(args) => sample::run(args),
        Command::Score(args) => score::run(args),
        Command::Pairs(args) => pairs::run(args),
        Command::Report(args) => report::run(args),
    }
}
