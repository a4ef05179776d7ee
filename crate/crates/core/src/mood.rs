//! The fifteen unconditionally valid syllogistic moods.
//!
//! A mood fixes the forms of major premise, minor premise and conclusion;
//! its figure fixes where the shared middle term sits. With subject `S`,
//! predicate `P` and middle `M`, and the conclusion always relating `S` to
//! `P`:
//!
//! | figure | major  | minor  |
//! |--------|--------|--------|
//! | 1      | M to P | S to M |
//! | 2      | P to M | S to M |
//! | 3      | M to P | M to S |
//! | 4      | P to M | M to S |
//!
//! Only moods valid without existential import are listed. Premises are
//! matched against each figure's exact term placement; the symmetry of E
//! and I never needs a conversion step because the table is closed under
//! swapping the arguments of symmetric premises (for example Celarent with
//! a swapped major is Cesare).

use thiserror::Error;

use crate::prop::{PropForm, Proposition, TermId};

/// One valid premise-pair schema together with its conclusion form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SyllogismMood {
    /// Traditional mnemonic name.
    pub name: &'static str,
    /// Figure 1 through 4; see the module table.
    pub figure: u8,
    pub major_form: PropForm,
    pub minor_form: PropForm,
    pub conclusion_form: PropForm,
}

use PropForm::{A, E, I, O};

/// All fifteen unconditionally valid moods, grouped by figure.
pub static MOODS: [SyllogismMood; 15] = [
    SyllogismMood { name: "Barbara", figure: 1, major_form: A, minor_form: A, conclusion_form: A },
    SyllogismMood { name: "Celarent", figure: 1, major_form: E, minor_form: A, conclusion_form: E },
    SyllogismMood { name: "Darii", figure: 1, major_form: A, minor_form: I, conclusion_form: I },
    SyllogismMood { name: "Ferio", figure: 1, major_form: E, minor_form: I, conclusion_form: O },
    SyllogismMood { name: "Cesare", figure: 2, major_form: E, minor_form: A, conclusion_form: E },
    SyllogismMood { name: "Camestres", figure: 2, major_form: A, minor_form: E, conclusion_form: E },
    SyllogismMood { name: "Festino", figure: 2, major_form: E, minor_form: I, conclusion_form: O },
    SyllogismMood { name: "Baroco", figure: 2, major_form: A, minor_form: O, conclusion_form: O },
    SyllogismMood { name: "Datisi", figure: 3, major_form: A, minor_form: I, conclusion_form: I },
    SyllogismMood { name: "Disamis", figure: 3, major_form: I, minor_form: A, conclusion_form: I },
    SyllogismMood { name: "Ferison", figure: 3, major_form: E, minor_form: I, conclusion_form: O },
    SyllogismMood { name: "Bocardo", figure: 3, major_form: O, minor_form: A, conclusion_form: O },
    SyllogismMood { name: "Calemes", figure: 4, major_form: A, minor_form: E, conclusion_form: E },
    SyllogismMood { name: "Dimatis", figure: 4, major_form: I, minor_form: A, conclusion_form: I },
    SyllogismMood { name: "Fresison", figure: 4, major_form: E, minor_form: I, conclusion_form: O },
];

/// Moods whose conclusion has the given form.
pub fn moods_concluding(form: PropForm) -> impl Iterator<Item = &'static SyllogismMood> {
    MOODS.iter().filter(move |m| m.conclusion_form == form)
}

/// Why a premise pair fails to instantiate a mood.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum MoodError {
    #[error("{mood}: premise forms do not match")]
    FormMismatch { mood: &'static str },
    #[error("{mood}: term positions do not fit the figure")]
    PositionMismatch { mood: &'static str },
    #[error("{mood}: premise endpoints coincide, conclusion would be degenerate")]
    DegenerateConclusion { mood: &'static str },
}

/// Instantiates `mood` on an ordered premise pair.
///
/// Returns the conclusion when forms and term placement fit the figure
/// exactly. The middle term is the one eliminated by the step and can be
/// recovered with [`middle_term`].
pub fn apply_mood(
    mood: &SyllogismMood,
    major: Proposition,
    minor: Proposition,
) -> Result<Proposition, MoodError> {
    if major.form != mood.major_form || minor.form != mood.minor_form {
        return Err(MoodError::FormMismatch { mood: mood.name });
    }
    // Figure placement: (middle, predicate) from the major, (subject, middle)
    // from the minor, with the middle's slot per figure.
    let (middle, predicate) = match mood.figure {
        1 | 3 => (major.subject, major.predicate),
        2 | 4 => (major.predicate, major.subject),
        f => unreachable!("figure {f} out of range"),
    };
    let (subject, minor_middle) = match mood.figure {
        1 | 2 => (minor.subject, minor.predicate),
        3 | 4 => (minor.predicate, minor.subject),
        _ => unreachable!(),
    };
    if minor_middle != middle {
        return Err(MoodError::PositionMismatch { mood: mood.name });
    }
    Proposition::try_new(subject, predicate, mood.conclusion_form)
        .ok_or(MoodError::DegenerateConclusion { mood: mood.name })
}

/// The term shared by both propositions, if there is exactly one.
pub fn middle_term(p: Proposition, q: Proposition) -> Option<TermId> {
    let shared: Vec<TermId> =
        p.terms().into_iter().filter(|t| q.mentions(*t)).collect();
    match shared.as_slice() {
        [m] => Some(*m),
        _ => None,
    }
}

/// Every conclusion derivable from the unordered premise pair in one step.
///
/// Both premise orders are tried against all fifteen moods. Conclusions are
/// deduplicated up to E/I symmetry.
pub fn match_moods(
    p: Proposition,
    q: Proposition,
) -> Vec<(&'static SyllogismMood, Proposition)> {
    let mut found: Vec<(&'static SyllogismMood, Proposition)> = Vec::new();
    for (major, minor) in [(p, q), (q, p)] {
        for mood in &MOODS {
            if let Ok(conclusion) = apply_mood(mood, major, minor) {
                if !found.iter().any(|(_, c)| c.same_statement(conclusion)) {
                    found.push((mood, conclusion));
                }
            }
        }
    }
    found
}
