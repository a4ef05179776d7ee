//! JSONL row types and line-oriented readers and writers.
//!
//! Rows are self-contained: propositions are serialised with entity
//! surfaces rather than term ids, so a gold row can be rescored without
//! access to generation state.

use std::fs;
use std::io;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexicon::EntityStyle;
use crate::prompting::{QuestionType, RenderedPrompt, ResponseMode, Verdict};
use crate::prop::{Proposition, TermTable};
use crate::treegen::PromptInstance;

/// A proposition spelled with entity surfaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfProp {
    pub subject: String,
    pub predicate: String,
    pub form: crate::prop::PropForm,
}

impl SurfProp {
    pub fn from_prop(p: Proposition, terms: &TermTable) -> SurfProp {
        SurfProp {
            subject: terms.surface(p.subject).to_owned(),
            predicate: terms.surface(p.predicate).to_owned(),
            form: p.form,
        }
    }

    /// Resolves the surfaces against a term table, case-insensitively.
    pub fn to_prop(&self, terms: &TermTable) -> Option<Proposition> {
        let subject = terms.lookup_ci(&self.subject)?;
        let predicate = terms.lookup_ci(&self.predicate)?;
        Proposition::try_new(subject, predicate, self.form)
    }
}

/// One expansion of the tree, spelled with surfaces, in leaf-to-root order
/// within [`GoldRow::derivation`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationStep {
    pub mood: String,
    pub middle: String,
    pub major: SurfProp,
    pub minor: SurfProp,
    pub conclusion: SurfProp,
}

/// What a model sees: one prompt per line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptRow {
    pub id: String,
    pub text: String,
    pub question_type: QuestionType,
    pub mode: ResponseMode,
    pub level: u32,
    pub noise_count: u32,
}

/// Everything scoring needs about an instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldRow {
    pub id: String,
    pub level: u32,
    pub noise_count: u32,
    pub question_type: QuestionType,
    pub mode: ResponseMode,
    pub entity_style: EntityStyle,
    /// Entity surfaces in term-id order; index is the term id.
    pub entities: Vec<String>,
    pub leaves: Vec<SurfProp>,
    pub noise: Vec<SurfProp>,
    pub root: SurfProp,
    pub presented_conclusion: SurfProp,
    pub gold_verdict: Option<Verdict>,
    pub derivation: Vec<DerivationStep>,
    /// The ideal answer in this row's response mode.
    pub gold_response: String,
    pub seed: u64,
    pub instance_index: u64,
}

impl GoldRow {
    /// Assembles the gold row for a rendered instance.
    pub fn assemble(
        id: String,
        instance: &PromptInstance,
        prompt: &RenderedPrompt,
        gold_response: String,
        seed: u64,
        instance_index: u64,
    ) -> GoldRow {
        let terms = &instance.tree.terms;
        GoldRow {
            id,
            level: instance.level(),
            noise_count: instance.noise_count(),
            question_type: prompt.question_type,
            mode: prompt.mode,
            entity_style: instance.entity_style,
            entities: terms.surfaces().map(str::to_owned).collect(),
            leaves: instance.tree.leaves.iter().map(|p| SurfProp::from_prop(*p, terms)).collect(),
            noise: instance.noise.iter().map(|p| SurfProp::from_prop(*p, terms)).collect(),
            root: SurfProp::from_prop(instance.tree.root, terms),
            presented_conclusion: SurfProp::from_prop(prompt.presented_conclusion, terms),
            gold_verdict: prompt.gold_verdict,
            derivation: instance
                .tree
                .nodes
                .iter()
                .rev()
                .map(|node| DerivationStep {
                    mood: node.mood.name.to_owned(),
                    middle: terms.surface(node.middle).to_owned(),
                    major: SurfProp::from_prop(node.major, terms),
                    minor: SurfProp::from_prop(node.minor, terms),
                    conclusion: SurfProp::from_prop(node.conclusion, terms),
                })
                .collect(),
            gold_response,
            seed,
            instance_index,
        }
    }

    /// Rebuilds the term table from the entity list.
    pub fn term_table(&self) -> TermTable {
        let mut terms = TermTable::new();
        for surface in &self.entities {
            terms.fresh(surface.clone());
        }
        terms
    }
}

/// Whether a sampled response actually came back from the endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransportStatus {
    Ok,
    Failed,
}

/// One sampled model response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseRecord {
    pub prompt_id: String,
    pub sample_index: u32,
    pub model_name: String,
    pub temperature: f64,
    pub raw_text: String,
    /// Unix seconds when the response was recorded.
    pub timestamp: u64,
    pub transport_status: TransportStatus,
}

#[derive(Debug, Error)]
pub enum RecordError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("{path}:{line}: {source}")]
    Parse {
        path: String,
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: row {line} could not be serialised: {source}")]
    Serialise {
        path: String,
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("pair references unknown {what} '{key}'")]
    MissingRef { what: &'static str, key: String },
}

fn path_str(path: &Path) -> String {
    path.display().to_string()
}

/// Reads one serialised row per non-empty line; errors carry line numbers.
pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, RecordError> {
    let text = fs::read_to_string(path)
        .map_err(|source| RecordError::Io { path: path_str(path), source })?;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row = serde_json::from_str(line).map_err(|source| RecordError::Parse {
            path: path_str(path),
            line: i + 1,
            source,
        })?;
        rows.push(row);
    }
    Ok(rows)
}

/// Writes one row per line.
pub fn write_jsonl<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), RecordError> {
    let mut out = String::new();
    for (i, row) in rows.iter().enumerate() {
        let line = serde_json::to_string(row).map_err(|source| RecordError::Serialise {
            path: path_str(path),
            line: i + 1,
            source,
        })?;
        out.push_str(&line);
        out.push('\n');
    }
    fs::write(path, out).map_err(|source| RecordError::Io { path: path_str(path), source })
}
