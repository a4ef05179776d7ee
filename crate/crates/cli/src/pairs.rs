//! The `pairs` subcommand: preference pairs from scored responses.

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;

use sorites_core::pairing::{compose, export, PairMethod, ResponseRef, ScoredResponse};
use sorites_core::records::{read_jsonl, PromptRow, ResponseRecord, TransportStatus};

use crate::rows::ScoreRow;

#[derive(Args)]
pub struct PairsArgs {
    /// Score rows produced by `score`.
    #[arg(long)]
    scores: PathBuf,
    /// Response records produced by `sample` (pair texts come from here).
    #[arg(long)]
    responses: PathBuf,
    /// Prompt rows produced by `generate` (prompt texts come from here).
    #[arg(long)]
    prompts: PathBuf,
    /// Composition rule: P, PN or R.
    #[arg(long, default_value = "PN")]
    method: PairMethod,
    /// Pair cap per prompt.
    #[arg(long, default_value_t = 4)]
    max_per_prompt: usize,
    /// Output path for pair rows.
    #[arg(long)]
    out: PathBuf,
}

pub fn run(args: PairsArgs) -> Result<()> {
    let scores: Vec<ScoreRow> = read_jsonl(&args.scores)
        .with_context(|| format!("reading scores from {}", args.scores.display()))?;
    let prompts: Vec<PromptRow> = read_jsonl(&args.prompts)
        .with_context(|| format!("reading prompts from {}", args.prompts.display()))?;
    let responses: Vec<ResponseRecord> = read_jsonl(&args.responses)
        .with_context(|| format!("reading responses from {}", args.responses.display()))?;

    let mut groups: BTreeMap<String, Vec<ScoredResponse>> = BTreeMap::new();
    let mut skipped = 0usize;
    for row in scores {
        if row.transport_status == TransportStatus::Failed {
            skipped += 1;
            continue;
        }
        groups.entry(row.prompt_id.clone()).or_default().push(ScoredResponse {
            key: ResponseRef { sample_index: row.sample_index, model_name: row.model_name },
            scores: row.scores,
        });
    }
    let pairs: Vec<_> = groups
        .iter()
        .flat_map(|(prompt_id, group)| compose(prompt_id, group, args.method, args.max_per_prompt))
        .collect();

    let prompt_texts: BTreeMap<String, String> =
        prompts.into_iter().map(|p| (p.id, p.text)).collect();
    let response_texts: BTreeMap<(String, u32, String), String> = responses
        .into_iter()
        .map(|r| ((r.prompt_id, r.sample_index, r.model_name), r.raw_text))
        .collect();
    let written = export(&pairs, &prompt_texts, &response_texts, &args.out)
        .with_context(|| format!("writing pairs to {}", args.out.display()))?;
    println!(
        "wrote {written} {} pairs to {} ({skipped} failed samples excluded)",
        args.method,
        args.out.display()
    );
    Ok(())
}
