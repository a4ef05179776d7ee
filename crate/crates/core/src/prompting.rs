//! Prompt rendering: statement templates, proof and judgment question
//! texts, JSON format-instruction blocks and gold responses.
//!
//! Statement templates, by form:
//!
//! - `A`: `All S are P`
//! - `E`: `No S are P`
//! - `I`: `There is one S that is P`
//! - `O`: `There is one S that is not P`
//!
//! A proof prompt asks to derive the root; a judgment prompt presents
//! either the root or its contradictory (a fair coin decides) and asks
//! whether it is correct. Formatted prompts prepend a fixed instruction
//! block whose worked example uses the reserved names PSI, CHI and OMEGA,
//! so it can never collide with instance entities.

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::prop::{Proposition, TermTable};
use crate::treegen::PromptInstance;

/// What the prompt asks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuestionType {
    /// Derive the stated conclusion from the conditions.
    Proof,
    /// Decide whether the stated conclusion is correct.
    Judgment,
}

/// How the response is expected to be written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResponseMode {
    /// Free-form prose.
    Natural,
    /// A single JSON object following the instruction block.
    Formatted,
}

/// A judgment answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Correct,
    Wrong,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Correct => "Correct",
            Verdict::Wrong => "Wrong",
        }
    }
}

/// Renders a statement with a capitalised quantifier, no trailing period.
pub fn render_statement(p: Proposition, terms: &TermTable) -> String {
    let s = terms.surface(p.subject);
    let o = terms.surface(p.predicate);
    match p.form {
        crate::prop::PropForm::A => format!("All {s} are {o}"),
        crate::prop::PropForm::E => format!("No {s} are {o}"),
        crate::prop::PropForm::I => format!("There is one {s} that is {o}"),
        crate::prop::PropForm::O => format!("There is one {s} that is not {o}"),
    }
}

/// Renders a statement lowercased for mid-sentence use.
pub fn render_statement_lower(p: Proposition, terms: &TermTable) -> String {
    let s = terms.surface(p.subject);
    let o = terms.surface(p.predicate);
    match p.form {
        crate::prop::PropForm::A => format!("all {s} are {o}"),
        crate::prop::PropForm::E => format!("no {s} are {o}"),
        crate::prop::PropForm::I => format!("there is one {s} that is {o}"),
        crate::prop::PropForm::O => format!("there is one {s} that is not {o}"),
    }
}

/// A rendered question plus the metadata scoring needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderedPrompt {
    pub text: String,
    pub question_type: QuestionType,
    pub mode: ResponseMode,
    /// The conclusion shown to the model (the root, possibly negated for
    /// judgment questions).
    pub presented_conclusion: Proposition,
    /// Expected answer for judgment questions; `None` for proofs.
    pub gold_verdict: Option<Verdict>,
}

fn condition_lines(instance: &PromptInstance) -> String {
    instance
        .presented
        .iter()
        .map(|p| format!("{}.", render_statement(*p, &instance.tree.terms)))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Renders a proof question over the instance's presented conditions.
pub fn render_proof(instance: &PromptInstance) -> RenderedPrompt {
    let conclusion = instance.tree.root;
    let text = format!(
        "Given:\n{}\nProve: {}.",
        condition_lines(instance),
        render_statement_lower(conclusion, &instance.tree.terms)
    );
    RenderedPrompt {
        text,
        question_type: QuestionType::Proof,
        mode: ResponseMode::Natural,
        presented_conclusion: conclusion,
        gold_verdict: None,
    }
}

/// Renders a judgment question; a fair coin decides whether the presented
/// conclusion is the root (gold `Correct`) or its contradictory (gold
/// `Wrong`).
pub fn render_judgment<R: Rng + ?Sized>(
    instance: &PromptInstance,
    rng: &mut R,
) -> RenderedPrompt {
    let negate = rng.random_bool(0.5);
    let (conclusion, verdict) = if negate {
        (instance.tree.root.negated(), Verdict::Wrong)
    } else {
        (instance.tree.root, Verdict::Correct)
    };
    let text = format!(
        "We have:\n{}\nShow {} is correct or not.",
        condition_lines(instance),
        render_statement_lower(conclusion, &instance.tree.terms)
    );
    RenderedPrompt {
        text,
        question_type: QuestionType::Judgment,
        mode: ResponseMode::Natural,
        presented_conclusion: conclusion,
        gold_verdict: Some(verdict),
    }
}

/// Instruction block for formatted proof answers. The worked example uses
/// only reserved entity names.
pub const PROOF_FORMAT_BLOCK: &str = r#"Answer with deduction steps. Give each step as a JSON object naming the conditions you used, the sentence you conclude, and that conclusion in structured form under "format_conclusion" with keys "Subject", "Predicate" and "type" (one of A, E, I, O). Reply with a single JSON object shaped like the example output and nothing else.

##Input:
Given:
No PSI are CHI.
All OMEGA are CHI.
Prove: no OMEGA are PSI.
##Output:
{"steps": [{"condition": ["No PSI are CHI", "All OMEGA are CHI"], "conclusion": "No OMEGA are PSI", "format_conclusion": {"Subject": "OMEGA", "Predicate": "PSI", "type": "E"}}]}"#;

/// Instruction block for formatted judgment answers.
pub const JUDGMENT_FORMAT_BLOCK: &str = r#"Answer with deduction steps. Give each step as a JSON object naming the conditions you used, the sentence you conclude, and that conclusion in structured form under "format_conclusion" with keys "Subject", "Predicate" and "type" (one of A, E, I, O). Close with a "result" of "Correct" or "Wrong". Reply with a single JSON object shaped like the example output and nothing else.

##Input:
We have:
No PSI are CHI.
All OMEGA are CHI.
Show no OMEGA are PSI is correct or not.
##Output:
{"steps": [{"condition": ["No PSI are CHI", "All OMEGA are CHI"], "conclusion": "No OMEGA are PSI", "format_conclusion": {"Subject": "OMEGA", "Predicate": "PSI", "type": "E"}}], "result": "Correct"}"#;

/// The instruction block for a question type.
pub fn format_block(question_type: QuestionType) -> &'static str {
    match question_type {
        QuestionType::Proof => PROOF_FORMAT_BLOCK,
        QuestionType::Judgment => JUDGMENT_FORMAT_BLOCK,
    }
}

/// Wraps a natural prompt in its format-instruction block and switches the
/// mode to formatted. The block is a compile-time constant, so every
/// prompt of the same question type shares it byte for byte.
pub fn attach_format_instructions(prompt: RenderedPrompt) -> RenderedPrompt {
    let text = format!(
        "{}\n\n##Input:\n{}\n##Output:\n",
        format_block(prompt.question_type),
        prompt.text
    );
    RenderedPrompt { text, mode: ResponseMode::Formatted, ..prompt }
}

fn gold_steps(instance: &PromptInstance) -> Vec<(Vec<Proposition>, Proposition)> {
    let tree = &instance.tree;
    if tree.nodes.is_empty() {
        // Level zero: restate the root from itself.
        return vec![(vec![tree.root], tree.root)];
    }
    tree.nodes
        .iter()
        .rev()
        .map(|node| (vec![node.major, node.minor], node.conclusion))
        .collect()
}

/// The ideal formatted answer: every derivation step leaf-to-root, plus
/// the verdict for judgment questions.
pub fn render_gold_formatted(instance: &PromptInstance, gold_verdict: Option<Verdict>) -> String {
    let terms = &instance.tree.terms;
    let steps: Vec<serde_json::Value> = gold_steps(instance)
        .into_iter()
        .map(|(conditions, conclusion)| {
            json!({
                "condition": conditions
                    .iter()
                    .map(|c| render_statement(*c, terms))
                    .collect::<Vec<_>>(),
                "conclusion": render_statement(conclusion, terms),
                "format_conclusion": {
                    "Subject": terms.surface(conclusion.subject),
                    "Predicate": terms.surface(conclusion.predicate),
                    "type": conclusion.form.code().to_string(),
                },
            })
        })
        .collect();
    let mut object = serde_json::Map::new();
    object.insert("steps".to_owned(), serde_json::Value::Array(steps));
    if let Some(verdict) = gold_verdict {
        object.insert("result".to_owned(), json!(verdict.as_str()));
    }
    serde_json::Value::Object(object).to_string()
}

/// The ideal natural-language answer: one sentence per derivation step,
/// plus a closing verdict sentence for judgment questions.
pub fn render_gold_natural(instance: &PromptInstance, gold_verdict: Option<Verdict>) -> String {
    let terms = &instance.tree.terms;
    let mut lines: Vec<String> = gold_steps(instance)
        .into_iter()
        .map(|(_, conclusion)| {
            format!("Therefore, {}.", render_statement_lower(conclusion, terms))
        })
        .collect();
    match gold_verdict {
        Some(Verdict::Correct) => lines.push("So the conclusion is correct.".to_owned()),
        Some(Verdict::Wrong) => lines.push("So the conclusion is wrong.".to_owned()),
        None => {}
    }
    lines.join("\n")
}
