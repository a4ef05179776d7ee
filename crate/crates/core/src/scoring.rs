//! Six-dimension scoring of a parsed response against its gold reference.
//!
//! Each extracted step is classified, in order, against two closures: the
//! `relation` of the essential leaf premises, and the `noise_relation` of
//! leaves plus noise conditions.
//!
//! - A step found in `relation` whose best derivation eliminates at least
//!   one middle term not yet credited is **correct-new**; its middles are
//!   credited.
//! - A step found in `relation` that credits nothing new is an **extra**
//!   step (a repeat or an irrelevant valid inference).
//! - A step whose contradictory is entailed by `noise_relation` is a
//!   **wrong** step.
//! - Anything else — unknown entities, statements that follow from
//!   nothing — is a **noise** step.
//!
//! `step_score` is the credited fraction of all middle terms; a level-zero
//! instance has no middles and scores 1.0 exactly when some step restates
//! the root. `result_score` asks for the root itself (proof) or the right
//! verdict (judgment); `intent_score` passes through the parser's intent
//! flag.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::closure::{closure, ClosureConfig, ClosureError, RelationTable};
use crate::parsing::ParsedResponse;
use crate::prompting::{QuestionType, Verdict};
use crate::prop::{Proposition, TermId, TermTable};
use crate::records::GoldRow;

/// The six response scores.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreVector {
    /// Fraction of middle terms eliminated by correct-new steps, in [0, 1].
    pub step_score: f64,
    /// 1 when the proof states the root / the judgment verdict matches.
    pub result_score: u8,
    /// 1 when the response engaged with the expected answer shape.
    pub intent_score: u8,
    pub wrong_steps: u32,
    pub noise_steps: u32,
    pub extra_steps: u32,
}

impl ScoreVector {
    /// The score of an empty or unparseable response.
    pub fn zero() -> ScoreVector {
        ScoreVector {
            step_score: 0.0,
            result_score: 0,
            intent_score: 0,
            wrong_steps: 0,
            noise_steps: 0,
            extra_steps: 0,
        }
    }
}

/// Prebuilt lookup state for scoring all responses to one prompt.
#[derive(Debug, Clone)]
pub struct ReferenceTables {
    pub terms: TermTable,
    /// Closure of the essential leaf premises.
    pub relation: RelationTable,
    /// Closure of leaves plus noise conditions.
    pub noise_relation: RelationTable,
    /// Middle terms a complete derivation must eliminate.
    pub all_middles: BTreeSet<TermId>,
    /// The true root (the derivation target, never negated).
    pub root: Proposition,
    pub presented_conclusion: Proposition,
    pub gold_verdict: Option<Verdict>,
    pub question_type: QuestionType,
}

#[derive(Debug, Error)]
pub enum ReferenceError {
    #[error("{prompt_id}: cannot resolve {what} against the entity list")]
    BadTerm { prompt_id: String, what: &'static str },
    #[error("{prompt_id}: {source}")]
    Closure {
        prompt_id: String,
        #[source]
        source: ClosureError,
    },
}

/// Rebuilds closures and lookup tables from a self-contained gold row.
pub fn build_reference(gold: &GoldRow, cfg: &ClosureConfig) -> Result<ReferenceTables, ReferenceError> {
    let terms = gold.term_table();
    let resolve = |surf: &crate::records::SurfProp, what: &'static str| {
        surf.to_prop(&terms)
            .ok_or_else(|| ReferenceError::BadTerm { prompt_id: gold.id.clone(), what })
    };

    let mut leaves = Vec::with_capacity(gold.leaves.len());
    for surf in &gold.leaves {
        leaves.push(resolve(surf, "leaf")?);
    }
    let mut noisy = leaves.clone();
    for surf in &gold.noise {
        noisy.push(resolve(surf, "noise condition")?);
    }
    let root = resolve(&gold.root, "root")?;
    let presented_conclusion = resolve(&gold.presented_conclusion, "presented conclusion")?;

    let mut all_middles = BTreeSet::new();
    for step in &gold.derivation {
        let id = terms
            .lookup_ci(&step.middle)
            .ok_or_else(|| ReferenceError::BadTerm { prompt_id: gold.id.clone(), what: "middle" })?;
        all_middles.insert(id);
    }

    let on_closure = |source| ReferenceError::Closure { prompt_id: gold.id.clone(), source };
    let relation = closure(&leaves, cfg).map_err(on_closure)?;
    let noise_relation = closure(&noisy, cfg).map_err(on_closure)?;

    Ok(ReferenceTables {
        terms,
        relation,
        noise_relation,
        all_middles,
        root,
        presented_conclusion,
        gold_verdict: gold.gold_verdict,
        question_type: gold.question_type,
    })
}

/// Scores one parsed response.
pub fn score(parsed: &ParsedResponse, refs: &ReferenceTables) -> ScoreVector {
    let middles = &refs.all_middles;
    let mut eliminated: BTreeSet<TermId> = BTreeSet::new();
    let mut wrong = 0u32;
    let mut noise = 0u32;
    let mut extra = 0u32;
    let mut root_restated = false;
    let mut level0_credit = false;

    for step in &parsed.steps {
        let subject = refs.terms.lookup_ci(&step.subject);
        let predicate = refs.terms.lookup_ci(&step.predicate);
        let prop = match (subject, predicate) {
            (Some(s), Some(p)) if s != p => Proposition::new(s, p, step.form),
            _ => {
                noise += 1;
                continue;
            }
        };

        // Best matching record: most not-yet-credited middles, smallest
        // elimination set on ties (for determinism).
        let mut best: Option<(&BTreeSet<TermId>, usize)> = None;
        for record in refs.relation.matching(prop) {
            let gain = record
                .eliminated
                .iter()
                .filter(|t| middles.contains(t) && !eliminated.contains(t))
                .count();
            let better = match best {
                None => true,
                Some((current, best_gain)) => {
                    gain > best_gain || (gain == best_gain && record.eliminated < *current)
                }
            };
            if better {
                best = Some((&record.eliminated, gain));
            }
        }

        match best {
            Some((record_elims, gain)) => {
                let restates_root = prop.same_statement(refs.root);
                root_restated |= restates_root;
                if gain > 0 {
                    eliminated.extend(record_elims.iter().filter(|t| middles.contains(t)));
                } else if middles.is_empty() && restates_root && !level0_credit {
                    // With no middles to eliminate, restating the root is
                    // the one correct step; repeats are extras.
                    level0_credit = true;
                } else {
                    extra += 1;
                }
            }
            None => {
                if refs.noise_relation.contains(prop.negated()) {
                    wrong += 1;
                } else {
                    noise += 1;
                }
            }
        }
    }

    let step_score = if middles.is_empty() {
        if level0_credit { 1.0 } else { 0.0 }
    } else {
        eliminated.len() as f64 / middles.len() as f64
    };
    let result = match refs.question_type {
        QuestionType::Proof => root_restated,
        QuestionType::Judgment => {
            refs.gold_verdict.is_some() && parsed.verdict == refs.gold_verdict
        }
    };

    ScoreVector {
        step_score,
        result_score: result as u8,
        intent_score: parsed.intent_ok as u8,
        wrong_steps: wrong,
        noise_steps: noise,
        extra_steps: extra,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::EntityStyle;
    use crate::parsing::ParsedStep;
    use crate::prompting::ResponseMode;
    use crate::prop::PropForm;
    use crate::records::{DerivationStep, SurfProp};

    fn surf(s: &str, p: &str, form: PropForm) -> SurfProp {
        SurfProp { subject: s.into(), predicate: p.into(), form }
    }

    /// The worked three-step chain: all A are B, all B are C, all C are D,
    /// root all A are D, middles {B, C}.
    fn chain_gold(question_type: QuestionType) -> GoldRow {
        GoldRow {
            id: "chain".into(),
            level: 2,
            noise_count: 1,
            question_type,
            mode: ResponseMode::Natural,
            entity_style: EntityStyle::Greek,
            entities: vec!["A".into(), "B".into(), "C".into(), "D".into(), "N".into()],
            leaves: vec![
                surf("A", "B", PropForm::A),
                surf("B", "C", PropForm::A),
                surf("C", "D", PropForm::A),
            ],
            noise: vec![surf("N", "A", PropForm::I)],
            root: surf("A", "D", PropForm::A),
            presented_conclusion: surf("A", "D", PropForm::A),
            gold_verdict: match question_type {
                QuestionType::Proof => None,
                QuestionType::Judgment => Some(Verdict::Correct),
            },
            derivation: vec![
                DerivationStep {
                    mood: "Barbara".into(),
                    middle: "C".into(),
                    major: surf("C", "D", PropForm::A),
                    minor: surf("B", "C", PropForm::A),
                    conclusion: surf("B", "D", PropForm::A),
                },
                DerivationStep {
                    mood: "Barbara".into(),
                    middle: "B".into(),
                    major: surf("B", "D", PropForm::A),
                    minor: surf("A", "B", PropForm::A),
                    conclusion: surf("A", "D", PropForm::A),
                },
            ],
            gold_response: String::new(),
            seed: 0,
            instance_index: 0,
        }
    }

    fn refs(question_type: QuestionType) -> ReferenceTables {
        build_reference(&chain_gold(question_type), &ClosureConfig::default()).unwrap()
    }

    fn steps(list: &[(&str, &str, PropForm)]) -> ParsedResponse {
        ParsedResponse {
            steps: list
                .iter()
                .map(|(s, p, form)| ParsedStep {
                    subject: (*s).into(),
                    predicate: (*p).into(),
                    form: *form,
                    span: (0, 0),
                })
                .collect(),
            verdict: None,
            intent_ok: true,
        }
    }

    #[test]
    fn half_credit_for_eliminating_one_of_two_middles() {
        let refs = refs(QuestionType::Proof);
        let v = score(&steps(&[("B", "D", PropForm::A)]), &refs);
        assert_eq!(v.step_score, 0.5);
        assert_eq!(v.result_score, 0);
        assert_eq!((v.wrong_steps, v.noise_steps, v.extra_steps), (0, 0, 0));
    }

    #[test]
    fn both_elimination_orders_reach_full_credit() {
        let refs = refs(QuestionType::Proof);
        let through_b_first = steps(&[("B", "D", PropForm::A), ("A", "D", PropForm::A)]);
        let through_c_first = steps(&[("A", "C", PropForm::A), ("A", "D", PropForm::A)]);
        for parsed in [through_b_first, through_c_first] {
            let v = score(&parsed, &refs);
            assert_eq!(v.step_score, 1.0);
            assert_eq!(v.result_score, 1, "proof states the root");
            assert_eq!((v.wrong_steps, v.noise_steps, v.extra_steps), (0, 0, 0));
        }
    }

    #[test]
    fn repeated_eliminations_count_as_extra_without_hurting_step_score() {
        let refs = refs(QuestionType::Proof);
        let v = score(
            &steps(&[
                ("B", "D", PropForm::A),
                ("B", "D", PropForm::A),
                ("A", "D", PropForm::A),
            ]),
            &refs,
        );
        assert_eq!(v.step_score, 1.0);
        assert_eq!(v.extra_steps, 1);

        let v = score(&steps(&[("B", "D", PropForm::A), ("B", "D", PropForm::A)]), &refs);
        assert_eq!(v.step_score, 0.5);
        assert_eq!(v.extra_steps, 1);
    }

    #[test]
    fn root_first_still_scores_full_but_marks_repeats_extra() {
        let refs = refs(QuestionType::Proof);
        let v = score(&steps(&[("A", "D", PropForm::A), ("B", "D", PropForm::A)]), &refs);
        assert_eq!(v.step_score, 1.0);
        assert_eq!(v.result_score, 1);
        assert_eq!(v.extra_steps, 1, "second step adds nothing new");
    }

    #[test]
    fn contradictory_steps_are_wrong() {
        let refs = refs(QuestionType::Proof);
        let v = score(&steps(&[("A", "D", PropForm::O)]), &refs);
        assert_eq!(v.wrong_steps, 1);
        assert_eq!(v.step_score, 0.0);
        // Contradicting a noise-derived fact also counts as wrong: the
        // noise condition I(N, A) makes E(N, A) contradictory.
        let v = score(&steps(&[("N", "A", PropForm::E)]), &refs);
        assert_eq!(v.wrong_steps, 1);
    }

    #[test]
    fn unknown_entities_and_underivable_statements_are_noise() {
        let refs = refs(QuestionType::Proof);
        let v = score(
            &steps(&[
                ("A", "Z", PropForm::A),    // unknown entity
                ("A", "A", PropForm::A),    // degenerate
                ("D", "A", PropForm::A),    // not derivable, not contradicted
                ("A", "D", PropForm::I),    // needs existential import
                ("N", "A", PropForm::I),    // noise-condition restatement
            ]),
            &refs,
        );
        assert_eq!(v.noise_steps, 5);
        assert_eq!(v.wrong_steps, 0);
        assert_eq!(v.step_score, 0.0);
    }

    #[test]
    fn step_score_is_monotone_under_appending() {
        let refs = refs(QuestionType::Proof);
        let sequence = [
            ("D", "A", PropForm::A),
            ("B", "D", PropForm::A),
            ("A", "D", PropForm::O),
            ("A", "D", PropForm::A),
            ("B", "D", PropForm::A),
        ];
        let mut last = 0.0;
        for n in 0..=sequence.len() {
            let v = score(&steps(&sequence[..n]), &refs);
            assert!(v.step_score >= last, "prefix {n} dropped the step score");
            last = v.step_score;
        }
        assert_eq!(last, 1.0);
    }

    #[test]
    fn judgment_result_needs_the_matching_verdict() {
        let refs = refs(QuestionType::Judgment);
        let mut parsed = steps(&[("A", "D", PropForm::A)]);
        assert_eq!(score(&parsed, &refs).result_score, 0, "no verdict given");
        parsed.verdict = Some(Verdict::Correct);
        assert_eq!(score(&parsed, &refs).result_score, 1);
        parsed.verdict = Some(Verdict::Wrong);
        assert_eq!(score(&parsed, &refs).result_score, 0);
    }

    #[test]
    fn level_zero_scores_on_restating_the_root() {
        let mut gold = chain_gold(QuestionType::Proof);
        gold.level = 0;
        gold.leaves = vec![surf("A", "D", PropForm::A)];
        gold.noise.clear();
        gold.derivation.clear();
        gold.noise_count = 0;
        let refs = build_reference(&gold, &ClosureConfig::default()).unwrap();

        let v = score(&steps(&[("A", "D", PropForm::A)]), &refs);
        assert_eq!(v.step_score, 1.0);
        assert_eq!(v.result_score, 1);
        assert_eq!(v.extra_steps, 0);

        let v = score(&steps(&[("A", "D", PropForm::A), ("A", "D", PropForm::A)]), &refs);
        assert_eq!(v.step_score, 1.0);
        assert_eq!(v.extra_steps, 1);

        let v = score(&steps(&[]), &refs);
        assert_eq!(v.step_score, 0.0);
        assert_eq!(v.result_score, 0);
    }

    #[test]
    fn intent_passes_through_the_parser_flag() {
        let refs = refs(QuestionType::Proof);
        let mut parsed = steps(&[]);
        parsed.intent_ok = false;
        assert_eq!(score(&parsed, &refs).intent_score, 0);
        parsed.intent_ok = true;
        assert_eq!(score(&parsed, &refs).intent_score, 1);
    }

    #[test]
    fn bad_gold_rows_surface_reference_errors() {
        let mut gold = chain_gold(QuestionType::Proof);
        gold.entities.pop(); // drop N, orphaning the noise condition
        let err = build_reference(&gold, &ClosureConfig::default()).unwrap_err();
        assert!(matches!(err, ReferenceError::BadTerm { .. }));
    }
}
