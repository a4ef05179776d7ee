//! Total parsers for model responses. Neither parser ever fails: text that
//! yields nothing usable simply produces an empty [`ParsedResponse`].
//!
//! The formatted parser hunts for the first parseable JSON object in the
//! raw text (models often wrap their answer in prose or code fences) and
//! reads steps from `format_conclusion` entries. The natural parser works
//! sentence by sentence: it looks for two distinct known entities joined
//! by a copula, classifies the quantifier in front of the subject, and
//! reads a judgment verdict off polarity keywords near the end of the
//! text.

use std::collections::HashSet;

use serde_json::Value;

use crate::prompting::Verdict;
use crate::prop::PropForm;

/// One extracted deduction step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedStep {
    pub subject: String,
    pub predicate: String,
    pub form: PropForm,
    /// Byte range of the text the step was read from.
    pub span: (usize, usize),
}

/// Everything extracted from one response.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParsedResponse {
    pub steps: Vec<ParsedStep>,
    pub verdict: Option<Verdict>,
    /// Whether the response engaged with the task at all: for formatted
    /// mode, a JSON object with a `steps` array was found; for natural
    /// mode, at least one step or a verdict was extracted.
    pub intent_ok: bool,
}

// --- formatted mode ---

/// Scans for the closing brace of the object opening at `open`, honouring
/// strings and escapes.
fn object_end(bytes: &[u8], open: usize) -> Option<usize> {
    let mut depth = 0usize;
    let mut in_string = false;
    let mut escaped = false;
    for (i, &b) in bytes.iter().enumerate().skip(open) {
        if in_string {
            if escaped {
                escaped = false;
            } else if b == b'\\' {
                escaped = true;
            } else if b == b'"' {
                in_string = false;
            }
            continue;
        }
        match b {
            b'"' => in_string = true,
            b'{' => depth += 1,
            b'}' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i + 1);
                }
            }
            _ => {}
        }
    }
    None
}

/// The first substring that parses as a JSON object, with its byte span.
fn first_json_object(raw: &str) -> Option<(usize, usize, Value)> {
    let bytes = raw.as_bytes();
    let mut from = 0;
    while let Some(rel) = raw[from..].find('{') {
        let open = from + rel;
        if let Some(end) = object_end(bytes, open) {
            if let Ok(value) = serde_json::from_str::<Value>(&raw[open..end]) {
                if value.is_object() {
                    return Some((open, end, value));
                }
            }
        }
        from = open + 1;
    }
    None
}

/// Case-insensitive key lookup, preferring an exact match.
fn get_ci<'a>(obj: &'a serde_json::Map<String, Value>, key: &str) -> Option<&'a Value> {
    obj.get(key).or_else(|| {
        obj.iter()
            .find(|(k, _)| k.eq_ignore_ascii_case(key))
            .map(|(_, v)| v)
    })
}

fn verdict_word(word: &str) -> Option<Verdict> {
    let word = word.trim();
    if word.eq_ignore_ascii_case("correct") {
        Some(Verdict::Correct)
    } else if word.eq_ignore_ascii_case("wrong") {
        Some(Verdict::Wrong)
    } else {
        None
    }
}

/// Parses a formatted-mode response.
///
/// Malformed step entries are skipped individually; `intent_ok` only
/// requires that an object with a `steps` array was found.
pub fn parse_formatted(raw: &str) -> ParsedResponse {
    let Some((open, end, value)) = first_json_object(raw) else {
        return ParsedResponse::default();
    };
    let object = value.as_object().expect("filtered to objects");
    let steps_value = get_ci(object, "steps");
    let intent_ok = matches!(steps_value, Some(v) if v.is_array());

    let mut steps = Vec::new();
    if let Some(items) = steps_value.and_then(Value::as_array) {
        for item in items {
            let Some(entry) = item.as_object() else { continue };
            let Some(fc) = get_ci(entry, "format_conclusion").and_then(Value::as_object) else {
                continue;
            };
            let subject = get_ci(fc, "Subject").and_then(Value::as_str).map(str::trim);
            let predicate = get_ci(fc, "Predicate").and_then(Value::as_str).map(str::trim);
            let form = get_ci(fc, "type").and_then(Value::as_str).and_then(PropForm::from_code);
            if let (Some(subject), Some(predicate), Some(form)) = (subject, predicate, form) {
                if !subject.is_empty() && !predicate.is_empty() {
                    steps.push(ParsedStep {
                        subject: subject.to_owned(),
                        predicate: predicate.to_owned(),
                        form,
                        span: (open, end),
                    });
                }
            }
        }
    }

    let verdict = get_ci(object, "result")
        .and_then(Value::as_str)
        .and_then(verdict_word);
    ParsedResponse { steps, verdict, intent_ok }
}

// --- natural mode ---

#[derive(Debug)]
struct Token {
    lower: String,
    start: usize,
    end: usize,
}

fn tokenize(text: &str, base: usize) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut word_start: Option<usize> = None;
    for (i, ch) in text.char_indices() {
        if ch.is_alphanumeric() {
            word_start.get_or_insert(i);
        } else if let Some(start) = word_start.take() {
            tokens.push(Token {
                lower: text[start..i].to_lowercase(),
                start: base + start,
                end: base + i,
            });
        }
    }
    if let Some(start) = word_start {
        tokens.push(Token {
            lower: text[start..].to_lowercase(),
            start: base + start,
            end: base + text.len(),
        });
    }
    tokens
}

fn sentence_spans(raw: &str) -> Vec<(usize, usize)> {
    let mut spans = Vec::new();
    let mut start = 0;
    for (i, ch) in raw.char_indices() {
        if matches!(ch, '.' | '!' | '?' | ';' | '\n') {
            if i > start {
                spans.push((start, i));
            }
            start = i + ch.len_utf8();
        }
    }
    if start < raw.len() {
        spans.push((start, raw.len()));
    }
    spans
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Quantifier {
    Universal,
    NegUniversal,
    Particular,
}

fn quantifier_class(word: &str) -> Option<Quantifier> {
    match word {
        "all" | "every" | "each" => Some(Quantifier::Universal),
        "no" | "none" => Some(Quantifier::NegUniversal),
        "some" | "one" | "exists" | "exist" | "least" => Some(Quantifier::Particular),
        _ => None,
    }
}

fn is_relative(word: &str) -> bool {
    matches!(word, "that" | "which" | "who")
}

/// Tries to read one step from a sentence: the first two distinct known
/// entities joined by a recognised copula, with the nearest quantifier in
/// a four-token window before the subject deciding the form.
fn extract_step(tokens: &[Token], entities: &HashSet<String>, raw: &str) -> Option<ParsedStep> {
    let e1 = tokens.iter().position(|t| entities.contains(&t.lower))?;
    let e2 = tokens[e1 + 1..]
        .iter()
        .position(|t| entities.contains(&t.lower) && t.lower != tokens[e1].lower)?
        + e1
        + 1;

    let between: Vec<&str> = tokens[e1 + 1..e2].iter().map(|t| t.lower.as_str()).collect();
    let negative = match between.as_slice() {
        ["is"] | ["are"] => false,
        ["is", "not"] | ["are", "not"] => true,
        [rel, "is"] | [rel, "are"] if is_relative(rel) => false,
        [rel, "is", "not"] | [rel, "are", "not"] if is_relative(rel) => true,
        _ => return None,
    };

    let window_start = e1.saturating_sub(4);
    let quantifier = tokens[window_start..e1]
        .iter()
        .rev()
        .find_map(|t| quantifier_class(&t.lower));

    let form = match (quantifier, negative) {
        (Some(Quantifier::Universal), false) => PropForm::A,
        (Some(Quantifier::Universal), true) => PropForm::E,
        (Some(Quantifier::NegUniversal), false) => PropForm::E,
        // "no X are not Y" is double-negated; don't guess.
        (Some(Quantifier::NegUniversal), true) => return None,
        (Some(Quantifier::Particular), false) => PropForm::I,
        (Some(Quantifier::Particular), true) => PropForm::O,
        (None, false) => PropForm::A,
        (None, true) => PropForm::E,
    };

    Some(ParsedStep {
        subject: raw[tokens[e1].start..tokens[e1].end].to_owned(),
        predicate: raw[tokens[e2].start..tokens[e2].end].to_owned(),
        form,
        span: (tokens[e1].start, tokens[e2].end),
    })
}

const POSITIVE_SIGNALS: &[&str] = &["correct", "true", "holds", "hold", "valid"];
const NEGATIVE_SIGNALS: &[&str] =
    &["wrong", "incorrect", "false", "invalid", "contradiction", "contradicts", "contradictory"];
const NEGATORS: &[&str] =
    &["not", "no", "never", "cannot", "without", "isn", "doesn", "don", "aren", "wasn", "t"];

/// Reads a verdict from the given sentences; the last signal wins.
///
/// A signal is skipped when the sentence poses a question ("whether ...")
/// or when it echoes the prompt template ("... correct or not"). A negator
/// within the two tokens before a signal flips its polarity.
fn detect_verdict(sentences: &[Vec<Token>]) -> Option<Verdict> {
    let mut verdict = None;
    for tokens in sentences {
        let has_whether = tokens.iter().any(|t| t.lower == "whether");
        if has_whether {
            continue;
        }
        for (k, token) in tokens.iter().enumerate() {
            let word = token.lower.as_str();
            let positive = POSITIVE_SIGNALS.contains(&word);
            let negative = NEGATIVE_SIGNALS.contains(&word);
            if !positive && !negative {
                continue;
            }
            let echoes_template = tokens.get(k + 1).is_some_and(|t| t.lower == "or")
                && tokens.get(k + 2).is_some_and(|t| t.lower == "not");
            if echoes_template {
                continue;
            }
            let negated = tokens[k.saturating_sub(2)..k]
                .iter()
                .any(|t| NEGATORS.contains(&t.lower.as_str()));
            verdict = Some(match (negative, negated) {
                (false, false) | (true, true) => Verdict::Correct,
                (false, true) | (true, false) => Verdict::Wrong,
            });
        }
    }
    verdict
}

/// Parses a natural-language response against the instance's entity
/// surfaces. At most one step is read per sentence; the verdict is read
/// from the last three sentences.
pub fn parse_natural(raw: &str, entities: &[String]) -> ParsedResponse {
    let entity_set: HashSet<String> = entities.iter().map(|e| e.to_lowercase()).collect();
    let mut steps = Vec::new();
    let mut sentence_tokens: Vec<Vec<Token>> = Vec::new();
    for (start, end) in sentence_spans(raw) {
        let tokens = tokenize(&raw[start..end], start);
        if let Some(step) = extract_step(&tokens, &entity_set, raw) {
            steps.push(step);
        }
        sentence_tokens.push(tokens);
    }
    let tail = sentence_tokens.len().saturating_sub(3);
    let verdict = detect_verdict(&sentence_tokens[tail..]);
    let intent_ok = !steps.is_empty() || verdict.is_some();
    ParsedResponse { steps, verdict, intent_ok }
}
