//! The `score` subcommand: six-dimension scores for sampled responses.

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{anyhow, Context, Result};
use clap::Args;
use rayon::prelude::*;

use sorites_core::closure::ClosureConfig;
use sorites_core::parsing::{parse_formatted, parse_natural};
use sorites_core::prompting::ResponseMode;
use sorites_core::records::{read_jsonl, write_jsonl, GoldRow, ResponseRecord};
use sorites_core::scoring::{build_reference, score, ReferenceTables};

use crate::rows::ScoreRow;

#[derive(Args)]
pub struct ScoreArgs {
    /// Gold rows produced by `generate`.
    #[arg(long)]
    gold: PathBuf,
    /// Response records produced by `sample`.
    #[arg(long)]
    responses: PathBuf,
    /// Output path for score rows.
    #[arg(long)]
    out: PathBuf,
}

pub fn run(args: ScoreArgs) -> Result<()> {
    let golds: Vec<GoldRow> = read_jsonl(&args.gold)
        .with_context(|| format!("reading gold rows from {}", args.gold.display()))?;
    let responses: Vec<ResponseRecord> = read_jsonl(&args.responses)
        .with_context(|| format!("reading responses from {}", args.responses.display()))?;

    let references: Result<BTreeMap<&str, (&GoldRow, ReferenceTables)>> = golds
        .par_iter()
        .map(|gold| {
            let refs = build_reference(gold, &ClosureConfig::default())
                .with_context(|| format!("rebuilding reference tables for {}", gold.id))?;
            Ok((gold.id.as_str(), (gold, refs)))
        })
        .collect();
    let references = references?;

    let rows: Result<Vec<ScoreRow>> = responses
        .par_iter()
        .map(|response| {
            let (gold, refs) = references
                .get(response.prompt_id.as_str())
                .ok_or_else(|| anyhow!("response references unknown prompt {}", response.prompt_id))?;
            let parsed = match gold.mode {
                ResponseMode::Formatted => parse_formatted(&response.raw_text),
                ResponseMode::Natural => parse_natural(&response.raw_text, &gold.entities),
            };
            Ok(ScoreRow {
                prompt_id: response.prompt_id.clone(),
                sample_index: response.sample_index,
                model_name: response.model_name.clone(),
                level: gold.level,
                noise_count: gold.noise_count,
                question_type: gold.question_type,
                mode: gold.mode,
                transport_status: response.transport_status,
                scores: score(&parsed, refs),
            })
        })
        .collect();
    let mut rows = rows?;
    rows.sort_by(|a, b| {
        (&a.prompt_id, a.sample_index, &a.model_name)
            .cmp(&(&b.prompt_id, b.sample_index, &b.model_name))
    });

    write_jsonl(&args.out, &rows)
        .with_context(|| format!("writing scores to {}", args.out.display()))?;
    println!("wrote {} score rows to {}", rows.len(), args.out.display());
    Ok(())
}
