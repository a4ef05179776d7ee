//! Preference-pair composition from scored responses to the same prompt.
//!
//! Three composition rules:
//!
//! - **P** — the chosen response eliminates strictly more middles and its
//!   result is no worse.
//! - **PN** — Pareto dominance over all six dimensions (step, result and
//!   intent up; wrong, noise and extra counts down), strict in at least
//!   one.
//! - **R** — the chosen response gets the result right, the rejected one
//!   does not.
//!
//! Candidate pairs per prompt are ranked by score gap (step gap first,
//! then the remaining dimensions, then stable response keys) and
//! downsampled to a per-prompt cap.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::records::{write_jsonl, RecordError};
use crate::scoring::ScoreVector;

/// Pair composition rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PairMethod {
    P,
    #[serde(rename = "PN")]
    Pn,
    R,
}

impl FromStr for PairMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<PairMethod, String> {
        match s.to_ascii_uppercase().as_str() {
            "P" => Ok(PairMethod::P),
            "PN" => Ok(PairMethod::Pn),
            "R" => Ok(PairMethod::R),
            other => Err(format!("unknown pair method '{other}' (expected P, PN or R)")),
        }
    }
}

impl fmt::Display for PairMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairMethod::P => write!(f, "P"),
            PairMethod::Pn => write!(f, "PN"),
            PairMethod::R => write!(f, "R"),
        }
    }
}

/// Identifies one sampled response to a prompt.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ResponseRef {
    pub sample_index: u32,
    pub model_name: String,
}

/// A response key with its scores, ready for pairing.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredResponse {
    pub key: ResponseRef,
    pub scores: ScoreVector,
}

/// One chosen/rejected pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PreferencePair {
    pub prompt_id: String,
    pub method: PairMethod,
    pub chosen: ScoredResponse,
    pub rejected: ScoredResponse,
}

/// All six dimensions signed so that larger is better.
fn signed(v: &ScoreVector) -> [f64; 6] {
    [
        v.step_score,
        v.result_score as f64,
        v.intent_score as f64,
        -(v.wrong_steps as f64),
        -(v.noise_steps as f64),
        -(v.extra_steps as f64),
    ]
}

/// Whether `chosen` beats `rejected` under the given rule.
pub fn satisfies(method: PairMethod, chosen: &ScoreVector, rejected: &ScoreVector) -> bool {
    match method {
        PairMethod::P => {
            chosen.step_score > rejected.step_score
                && chosen.result_score >= rejected.result_score
        }
        PairMethod::Pn => {
            let (c, r) = (signed(chosen), signed(rejected));
            let none_worse = c.iter().zip(&r).all(|(a, b)| a >= b);
            let some_better = c.iter().zip(&r).any(|(a, b)| a > b);
            none_worse && some_better
        }
        PairMethod::R => chosen.result_score == 1 && rejected.result_score == 0,
    }
}

fn gap_key(pair: &PreferencePair) -> [f64; 6] {
    let c = signed(&pair.chosen.scores);
    let r = signed(&pair.rejected.scores);
    [c[0] - r[0], c[1] - r[1], c[2] - r[2], c[3] - r[3], c[4] - r[4], c[5] - r[5]]
}

/// Composes up to `max_pairs` pairs from one prompt's responses.
///
/// Every ordered pair satisfying the rule is a candidate; candidates are
/// ranked by descending score gap with response keys as the final
/// tiebreak, so the output is deterministic for a given input order-free
/// set of responses.
pub fn compose(
    prompt_id: &str,
    responses: &[ScoredResponse],
    method: PairMethod,
    max_pairs: usize,
) -> Vec<PreferencePair> {
    let mut candidates: Vec<PreferencePair> = Vec::new();
    for chosen in responses {
        for rejected in responses {
            if chosen.key == rejected.key {
                continue;
            }
            if satisfies(method, &chosen.scores, &rejected.scores) {
                candidates.push(PreferencePair {
                    prompt_id: prompt_id.to_owned(),
                    method,
                    chosen: chosen.clone(),
                    rejected: rejected.clone(),
                });
            }
        }
    }
    candidates.sort_by(|x, y| {
        let (kx, ky) = (gap_key(x), gap_key(y));
        for i in 0..6 {
            match ky[i].total_cmp(&kx[i]) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        (&x.chosen.key, &x.rejected.key).cmp(&(&y.chosen.key, &y.rejected.key))
    });
    candidates.truncate(max_pairs);
    candidates
}

/// A pair as exported: full texts inlined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRow {
    pub prompt_id: String,
    pub method: PairMethod,
    pub prompt_text: String,
    pub chosen_text: String,
    pub rejected_text: String,
    pub chosen: ResponseRef,
    pub rejected: ResponseRef,
    pub chosen_scores: ScoreVector,
    pub rejected_scores: ScoreVector,
}

/// Writes pairs as JSONL with prompt and response texts inlined,
/// deduplicating identical (prompt, chosen, rejected, method) keys.
/// Returns the number of rows written.
pub fn export(
    pairs: &[PreferencePair],
    prompt_texts: &BTreeMap<String, String>,
    response_texts: &BTreeMap<(String, u32, String), String>,
    path: &Path,
) -> Result<usize, RecordError> {
    let mut seen: BTreeSet<(String, PairMethod, ResponseRef, ResponseRef)> = BTreeSet::new();
    let mut rows: Vec<PairRow> = Vec::new();
    for pair in pairs {
        let key = (
            pair.prompt_id.clone(),
            pair.method,
            pair.chosen.key.clone(),
            pair.rejected.key.clone(),
        );
        if !seen.insert(key) {
            continue;
        }
        let prompt_text = prompt_texts.get(&pair.prompt_id).ok_or(RecordError::MissingRef {
            what: "prompt",
            key: pair.prompt_id.clone(),
        })?;
        let text_of = |r: &ResponseRef| {
            response_texts
                .get(&(pair.prompt_id.clone(), r.sample_index, r.model_name.clone()))
                .ok_or(RecordError::MissingRef {
                    what: "response",
                    key: format!("{}#{}@{}", pair.prompt_id, r.sample_index, r.model_name),
                })
        };
        rows.push(PairRow {
            prompt_id: pair.prompt_id.clone(),
            method: pair.method,
            prompt_text: prompt_text.clone(),
            chosen_text: text_of(&pair.chosen.key)?.clone(),
            rejected_text: text_of(&pair.rejected.key)?.clone(),
            chosen: pair.chosen.key.clone(),
            rejected: pair.rejected.key.clone(),
            chosen_scores: pair.chosen.scores,
            rejected_scores: pair.rejected.scores,
        });
    }
    write_jsonl(path, &rows)?;
    Ok(rows.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vector(
        step: f64,
        result: u8,
        intent: u8,
        wrong: u32,
        noise: u32,
        extra: u32,
    ) -> ScoreVector {
        ScoreVector {
            step_score: step,
            result_score: result,
            intent_score: intent,
            wrong_steps: wrong,
            noise_steps: noise,
            extra_steps: extra,
        }
    }

    fn response(i: u32, scores: ScoreVector) -> ScoredResponse {
        ScoredResponse {
            key: ResponseRef { sample_index: i, model_name: "m".into() },
            scores,
        }
    }

    #[test]
    fn p_rule_needs_strict_step_gain_and_no_worse_result() {
        let better = vector(0.8, 1, 1, 0, 0, 0);
        let worse = vector(0.4, 1, 1, 0, 0, 0);
        assert!(satisfies(PairMethod::P, &better, &worse));
        assert!(!satisfies(PairMethod::P, &worse, &better));
        // Equal step scores never qualify.
        assert!(!satisfies(PairMethod::P, &better, &better));
        // A step win cannot excuse a result regression.
        let high_step_no_result = vector(0.9, 0, 1, 0, 0, 0);
        assert!(!satisfies(PairMethod::P, &high_step_no_result, &worse));
        // Noise counts are ignored by P.
        let noisy_winner = vector(0.8, 1, 1, 5, 5, 5);
        assert!(satisfies(PairMethod::P, &noisy_winner, &worse));
    }

    #[test]
    fn pn_rule_is_pareto_dominance_over_all_six_dimensions() {
        let base = vector(0.5, 1, 1, 1, 2, 1);
        let cleaner = vector(0.5, 1, 1, 0, 2, 1);
        assert!(satisfies(PairMethod::Pn, &cleaner, &base));
        assert!(!satisfies(PairMethod::Pn, &base, &cleaner));
        // Equal vectors have no strict dimension.
        assert!(!satisfies(PairMethod::Pn, &base, &base));
        // A trade-off (better step, more noise) is not dominance.
        let traded = vector(0.8, 1, 1, 1, 3, 1);
        assert!(!satisfies(PairMethod::Pn, &traded, &base));
        assert!(!satisfies(PairMethod::Pn, &base, &traded));
    }

    #[test]
    fn r_rule_only_looks_at_results() {
        let right = vector(0.0, 1, 0, 9, 9, 9);
        let wrong = vector(1.0, 0, 1, 0, 0, 0);
        assert!(satisfies(PairMethod::R, &right, &wrong));
        assert!(!satisfies(PairMethod::R, &wrong, &right));
        assert!(!satisfies(PairMethod::R, &right, &right));
    }

    #[test]
    fn compose_ranks_by_gap_and_truncates() {
        let group = [
            response(0, vector(1.0, 1, 1, 0, 0, 0)),
            response(1, vector(0.5, 1, 1, 0, 0, 0)),
            response(2, vector(0.0, 1, 1, 0, 0, 0)),
        ];
        let pairs = compose("q", &group, PairMethod::P, 10);
        // Valid pairs: (0,1), (0,2), (1,2); widest gap first.
        assert_eq!(pairs.len(), 3);
        assert_eq!(
            (pairs[0].chosen.key.sample_index, pairs[0].rejected.key.sample_index),
            (0, 2)
        );
        let gaps: Vec<f64> = pairs.iter().map(|p| gap_key(p)[0]).collect();
        assert_eq!(gaps, vec![1.0, 0.5, 0.5]);
        // Equal gaps tie-break on response keys: (0,1) before (1,2).
        assert_eq!(
            (pairs[1].chosen.key.sample_index, pairs[1].rejected.key.sample_index),
            (0, 1)
        );

        let capped = compose("q", &group, PairMethod::P, 2);
        assert_eq!(capped.len(), 2);
        assert_eq!(capped, pairs[..2]);
    }

    #[test]
    fn compose_yields_nothing_for_indistinguishable_groups() {
        let same = vector(0.5, 1, 1, 0, 0, 0);
        let group = [response(0, same), response(1, same)];
        for method in [PairMethod::P, PairMethod::Pn, PairMethod::R] {
            assert!(compose("q", &group, method, 10).is_empty(), "{method}");
        }
    }

    #[test]
    fn every_composed_pair_satisfies_its_rule() {
        let group = [
            response(0, vector(1.0, 1, 1, 0, 0, 0)),
            response(1, vector(0.75, 0, 1, 1, 0, 2)),
            response(2, vector(0.75, 1, 1, 0, 3, 0)),
            response(3, vector(0.0, 0, 0, 4, 4, 4)),
        ];
        for method in [PairMethod::P, PairMethod::Pn, PairMethod::R] {
            for pair in compose("q", &group, method, 100) {
                assert!(
                    satisfies(method, &pair.chosen.scores, &pair.rejected.scores),
                    "{method} emitted a non-conforming pair"
                );
            }
        }
    }

    #[test]
    fn export_inlines_texts_and_dedups() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("pairs.jsonl");
        let a = response(0, vector(1.0, 1, 1, 0, 0, 0));
        let b = response(1, vector(0.0, 0, 0, 0, 0, 0));
        let pair = PreferencePair {
            prompt_id: "q1".into(),
            method: PairMethod::R,
            chosen: a,
            rejected: b,
        };
        let pairs = vec![pair.clone(), pair.clone()];
        let prompts: BTreeMap<String, String> =
            [("q1".into(), "the prompt".into())].into_iter().collect();
        let responses: BTreeMap<(String, u32, String), String> = [
            (("q1".into(), 0, "m".into()), "winner text".into()),
            (("q1".into(), 1, "m".into()), "loser text".into()),
        ]
        .into_iter()
        .collect();
        let written = export(&pairs, &prompts, &responses, &path).unwrap();
        assert_eq!(written, 1, "duplicate pair must be dropped");
        let rows: Vec<PairRow> = crate::records::read_jsonl(&path).unwrap();
        assert_eq!(rows[0].prompt_text, "the prompt");
        assert_eq!(rows[0].chosen_text, "winner text");
        assert_eq!(rows[0].rejected_text, "loser text");

        // A pair naming an unknown response is an error, not a silent skip.
        let mut missing = pair;
        missing.rejected.key.sample_index = 9;
        let err = export(&[missing], &prompts, &responses, &path);
        assert!(matches!(err, Err(RecordError::MissingRef { .. })));
    }
}
