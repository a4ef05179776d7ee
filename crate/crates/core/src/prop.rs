//! Terms and categorical propositions.
//!
//! A proposition relates two distinct terms through one of the four
//! categorical forms. Semantics are modern (no existential import):
//!
//! - `A`: every member of the subject is a member of the predicate
//! - `E`: no member of the subject is a member of the predicate
//! - `I`: some member of the subject is a member of the predicate
//! - `O`: some member of the subject is not a member of the predicate
//!
//! `E` and `I` are symmetric in their arguments; `A` and `O` are not.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Index of a term within a [`TermTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TermId(pub u32);

impl TermId {
    /// Position usable to index slices sized by the owning table.
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for TermId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

/// The four categorical proposition forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PropForm {
    /// Universal affirmative: "All S are P".
    A,
    /// Universal negative: "No S are P".
    E,
    /// Particular affirmative: "There is one S that is P".
    I,
    /// Particular negative: "There is one S that is not P".
    O,
}

impl PropForm {
    /// All four forms in canonical order.
    pub const ALL: [PropForm; 4] = [PropForm::A, PropForm::E, PropForm::I, PropForm::O];

    /// Whether the form is invariant under swapping subject and predicate.
    pub fn is_symmetric(self) -> bool {
        matches!(self, PropForm::E | PropForm::I)
    }

    /// The contradictory form on the same term pair (A<->O, E<->I).
    pub fn negated(self) -> PropForm {
        match self {
            PropForm::A => PropForm::O,
            PropForm::O => PropForm::A,
            PropForm::E => PropForm::I,
            PropForm::I => PropForm::E,
        }
    }

    /// Parses a single-letter form code, case-insensitively.
    pub fn from_code(code: &str) -> Option<PropForm> {
        match code.trim() {
            "A" | "a" => Some(PropForm::A),
            "E" | "e" => Some(PropForm::E),
            "I" | "i" => Some(PropForm::I),
            "O" | "o" => Some(PropForm::O),
            _ => None,
        }
    }

    /// The single-letter form code.
    pub fn code(self) -> char {
        match self {
            PropForm::A => 'A',
            PropForm::E => 'E',
            PropForm::I => 'I',
            PropForm::O => 'O',
        }
    }
}

impl fmt::Display for PropForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

/// A categorical proposition over two distinct terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Proposition {
    pub subject: TermId,
    pub predicate: TermId,
    pub form: PropForm,
}

impl Proposition {
    /// Builds a proposition; panics if subject and predicate coincide.
    pub fn new(subject: TermId, predicate: TermId, form: PropForm) -> Proposition {
        assert_ne!(subject, predicate, "degenerate proposition over {subject}");
        Proposition { subject, predicate, form }
    }

    /// Builds a proposition, or `None` when the terms coincide.
    pub fn try_new(subject: TermId, predicate: TermId, form: PropForm) -> Option<Proposition> {
        (subject != predicate).then_some(Proposition { subject, predicate, form })
    }

    /// The contradictory of this proposition: same pair, negated form.
    pub fn negated(self) -> Proposition {
        Proposition { form: self.form.negated(), ..self }
    }

    /// Subject and predicate, in that order.
    pub fn terms(self) -> [TermId; 2] {
        [self.subject, self.predicate]
    }

    /// Whether the proposition mentions the given term.
    pub fn mentions(self, term: TermId) -> bool {
        self.subject == term || self.predicate == term
    }

    /// Equality up to the argument symmetry of E and I.
    pub fn same_statement(self, other: Proposition) -> bool {
        if self == other {
            return true;
        }
        self.form == other.form
            && self.form.is_symmetric()
            && self.subject == other.predicate
            && self.predicate == other.subject
    }

    /// The symmetry-canonical variant: E and I are stored subject-min first.
    pub fn canonical(self) -> Proposition {
        if self.form.is_symmetric() && self.predicate < self.subject {
            Proposition { subject: self.predicate, predicate: self.subject, form: self.form }
        } else {
            self
        }
    }
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}, {})", self.form, self.subject, self.predicate)
    }
}

/// Whether two propositions are contradictories.
///
/// Exactly the pairs A/O and E/I over the same statement count; contraries
/// such as "All S are P" versus "No S are P" do not (both are false together
/// in no model, but both can be false, and under modern semantics both can
/// hold over an empty subject). The relation is symmetric and irreflexive.
pub fn contradicts(p: &Proposition, q: &Proposition) -> bool {
    p.negated().same_statement(*q)
}

/// Interns term surfaces and hands out dense [`TermId`]s.
///
/// Surfaces start out as placeholders during tree generation and are
/// rewritten by entity grounding; lookups are case-insensitive because
/// responses quote entity names in arbitrary case.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermTable {
    surfaces: Vec<String>,
}

impl TermTable {
    pub fn new() -> TermTable {
        TermTable::default()
    }

    /// Adds a term with the given surface and returns its id.
    pub fn fresh(&mut self, surface: impl Into<String>) -> TermId {
        let id = TermId(self.surfaces.len() as u32);
        self.surfaces.push(surface.into());
        id
    }

    /// The surface string of a term.
    pub fn surface(&self, id: TermId) -> &str {
        &self.surfaces[id.index()]
    }

    /// Replaces the surface of a term (used by entity grounding).
    pub fn set_surface(&mut self, id: TermId, surface: impl Into<String>) {
        self.surfaces[id.index()] = surface.into();
    }

    /// Number of interned terms.
    pub fn len(&self) -> usize {
        self.surfaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.surfaces.is_empty()
    }

    /// All ids in insertion order.
    pub fn ids(&self) -> impl Iterator<Item = TermId> + '_ {
        (0..self.surfaces.len() as u32).map(TermId)
    }

    /// All surfaces in id order.
    pub fn surfaces(&self) -> impl Iterator<Item = &str> {
        self.surfaces.iter().map(String::as_str)
    }

    /// Case-insensitive surface lookup; first match wins.
    pub fn lookup_ci(&self, surface: &str) -> Option<TermId> {
        let needle = surface.trim();
        self.surfaces
            .iter()
            .position(|s| s.eq_ignore_ascii_case(needle))
            .map(|i| TermId(i as u32))
    }
}
