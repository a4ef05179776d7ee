//! Synthetic multi-step categorical deduction data: backward generation of
//! syllogism chains, prompt rendering, response parsing and scoring, and
//! preference-pair composition.
//!
//! The pipeline is organised bottom-up:
//!
//! - [`prop`] — terms and the four categorical proposition forms (A/E/I/O)
//! - [`mood`] — the fifteen unconditionally valid syllogistic moods
//! - [`semantics`] — an independent set-model checker used as a test oracle
//! - [`closure`] — deductive closure with middle-term elimination tracking
//! - [`lexicon`] — Greek-letter names and generated virtual nouns
//! - [`treegen`] — backward generation of deduction trees plus noise injection
//! - [`prompting`] — natural-language and JSON-formatted prompt rendering
//! - [`parsing`] — total parsers for model responses in both modes
//! - [`scoring`] — the six-dimension score vector for a parsed response
//! - [`pairing`] — preference-pair composition (P / PN / R rules)
//! - [`records`] — JSONL row types and line-oriented readers/writers

pub mod closure;
pub mod lexicon;
pub mod mood;
pub mod pairing;
pub mod parsing;
pub mod prompting;
pub mod prop;
pub mod records;
pub mod scoring;
pub mod semantics;
pub mod treegen;

pub use closure::{closure, derivable, ClosureConfig, ClosureError, RelationRecord, RelationTable};
pub use mood::{apply_mood, match_moods, middle_term, moods_concluding, MoodError, SyllogismMood, MOODS};
pub use prop::{contradicts, PropForm, Proposition, TermId, TermTable};
