//! The `report` subcommand: aggregate score statistics.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};

use sorites_core::prompting::QuestionType;
use sorites_core::records::{read_jsonl, TransportStatus};

use crate::rows::ScoreRow;

#[derive(Args)]
pub struct ReportArgs {
    /// Score rows produced by `score`.
    #[arg(long)]
    scores: PathBuf,
    /// Optional path for the JSON report; stdout gets a text summary
    /// either way.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Mean scores over one slice of the samples.
#[derive(Debug, Default, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub count: usize,
    pub mean_step_score: f64,
    pub result_rate: f64,
    pub intent_rate: f64,
    pub mean_wrong_steps: f64,
    pub mean_noise_steps: f64,
    pub mean_extra_steps: f64,
}

#[derive(Default)]
struct Accumulator {
    count: usize,
    step: f64,
    result: u64,
    intent: u64,
    wrong: u64,
    noise: u64,
    extra: u64,
}

impl Accumulator {
    fn add(&mut self, row: &ScoreRow) {
        self.count += 1;
        self.step += row.scores.step_score;
        self.result += row.scores.result_score as u64;
        self.intent += row.scores.intent_score as u64;
        self.wrong += row.scores.wrong_steps as u64;
        self.noise += row.scores.noise_steps as u64;
        self.extra += row.scores.extra_steps as u64;
    }

    fn finish(&self) -> Aggregate {
        let n = self.count.max(1) as f64;
        Aggregate {
            count: self.count,
            mean_step_score: self.step / n,
            result_rate: self.result as f64 / n,
            intent_rate: self.intent as f64 / n,
            mean_wrong_steps: self.wrong as f64 / n,
            mean_noise_steps: self.noise as f64 / n,
            mean_extra_steps: self.extra as f64 / n,
        }
    }
}

/// Aggregates over all transport-successful samples plus breakdowns.
#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scored_samples: usize,
    /// Transport failures excluded from every aggregate.
    pub failed_samples: usize,
    pub overall: Aggregate,
    pub by_level: BTreeMap<u32, Aggregate>,
    pub by_noise_count: BTreeMap<u32, Aggregate>,
    pub by_question_type: BTreeMap<String, Aggregate>,
}

fn question_type_key(qt: QuestionType) -> &'static str {
    match qt {
        QuestionType::Proof => "proof",
        QuestionType::Judgment => "judgment",
    }
}

pub fn build_report(rows: &[ScoreRow]) -> Report {
    let mut overall = Accumulator::default();
    let mut by_level: BTreeMap<u32, Accumulator> = BTreeMap::new();
    let mut by_noise: BTreeMap<u32, Accumulator> = BTreeMap::new();
    let mut by_qt: BTreeMap<String, Accumulator> = BTreeMap::new();
    let mut failed = 0usize;
    for row in rows {
        if row.transport_status == TransportStatus::Failed {
            failed += 1;
            continue;
        }
        overall.add(row);
        by_level.entry(row.level).or_default().add(row);
        by_noise.entry(row.noise_count).or_default().add(row);
        by_qt.entry(question_type_key(row.question_type).to_owned()).or_default().add(row);
    }
    Report {
        scored_samples: overall.count,
        failed_samples: failed,
        overall: overall.finish(),
        by_level: by_level.iter().map(|(k, v)| (*k, v.finish())).collect(),
        by_noise_count: by_noise.iter().map(|(k, v)| (*k, v.finish())).collect(),
        by_question_type: by_qt.iter().map(|(k, v)| (k.clone(), v.finish())).collect(),
    }
}

fn print_line(label: &str, agg: &Aggregate) {
    println!(
        "  {label}: n={} step={:.3} result={:.3} intent={:.3} wrong={:.2} noise={:.2} extra={:.2}",
        agg.count,
        agg.mean_step_score,
        agg.result_rate,
        agg.intent_rate,
        agg.mean_wrong_steps,
        agg.mean_noise_steps,
        agg.mean_extra_steps
    );
}

pub fn run(args: ReportArgs) -> Result<()> {
    let rows: Vec<ScoreRow> = read_jsonl(&args.scores)
        .with_context(|| format!("reading scores from {}", args.scores.display()))?;
    let report = build_report(&rows);

    println!(
        "scored samples: {} ({} transport failures excluded)",
        report.scored_samples, report.failed_samples
    );
    print_line("overall", &report.overall);
    println!("by level:");
    for (level, agg) in &report.by_level {
        print_line(&format!("level {level:>2}"), agg);
    }
    println!("by noise count:");
    for (noise, agg) in &report.by_noise_count {
        print_line(&format!("noise {noise}"), agg);
    }
    println!("by question type:");
    for (qt, agg) in &report.by_question_type {
        print_line(qt, agg);
    }

    if let Some(path) = &args.out {
        let mut text = serde_json::to_string_pretty(&report).context("serialising report")?;
        text.push('\n');
        fs::write(path, text)
            .with_context(|| format!("writing report to {}", path.display()))?;
        println!("wrote JSON report to {}", path.display());
    }
    Ok(())
}
