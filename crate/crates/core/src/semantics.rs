//! Exhaustive finite set-model checking for categorical propositions.
//!
//! Terms denote subsets of a small universe; subsets are encoded as
//! bitmasks. This module is deliberately independent of the mood table in
//! [`crate::mood`] — it re-derives figure placement from scratch — so the
//! two can be checked against each other.
//!
//! Universes of size 0 through 3 decide three-term patterns exactly: a
//! countermodel needs at most one witness per particular premise (there are
//! at most two premises) plus one element falsifying the conclusion, and
//! universal premises survive restriction to any submodel. More generally,
//! one witness per particular premise plus one falsifier bounds the
//! universe needed for arbitrary premise sets, which [`sufficient_universe`]
//! computes.

use std::collections::BTreeSet;
use std::fmt;

use crate::prop::{PropForm, Proposition, TermId};

/// Whether `form` holds of subject/predicate extensions within `universe`.
///
/// Modern semantics, no existential import: `A` and `E` are vacuously true
/// of an empty subject, `I` and `O` demand a witness.
pub fn form_holds(form: PropForm, subject: u32, predicate: u32, universe: u32) -> bool {
    match form {
        PropForm::A => subject & !predicate & universe == 0,
        PropForm::E => subject & predicate & universe == 0,
        PropForm::I => subject & predicate & universe != 0,
        PropForm::O => subject & !predicate & universe != 0,
    }
}

/// A three-term assignment that satisfies a pattern's premises but not its
/// conclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatternModel {
    pub universe_size: usize,
    pub subject: u32,
    pub middle: u32,
    pub predicate: u32,
}

fn write_set(f: &mut fmt::Formatter<'_>, mask: u32, size: usize) -> fmt::Result {
    write!(f, "{{")?;
    let mut first = true;
    for bit in 0..size {
        if mask & (1 << bit) != 0 {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "x{bit}")?;
            first = false;
        }
    }
    write!(f, "}}")
}

impl fmt::Display for PatternModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|U|={} S=", self.universe_size)?;
        write_set(f, self.subject, self.universe_size)?;
        write!(f, " M=")?;
        write_set(f, self.middle, self.universe_size)?;
        write!(f, " P=")?;
        write_set(f, self.predicate, self.universe_size)
    }
}

/// Searches universes of size 0..=3 for a countermodel to the pattern
/// `figure/major/minor => conclusion`; `None` means the pattern is valid.
pub fn pattern_countermodel(
    figure: u8,
    major: PropForm,
    minor: PropForm,
    conclusion: PropForm,
) -> Option<PatternModel> {
    for size in 0..=3usize {
        let universe: u32 = (1 << size) - 1;
        for s in 0..=universe {
            for m in 0..=universe {
                for p in 0..=universe {
                    // Figure fixes which extensions each premise relates.
                    let major_ok = match figure {
                        1 | 3 => form_holds(major, m, p, universe),
                        2 | 4 => form_holds(major, p, m, universe),
                        f => panic!("figure {f} out of range"),
                    };
                    let minor_ok = match figure {
                        1 | 2 => form_holds(minor, s, m, universe),
                        _ => form_holds(minor, m, s, universe),
                    };
                    if major_ok && minor_ok && !form_holds(conclusion, s, p, universe) {
                        return Some(PatternModel {
                            universe_size: size,
                            subject: s,
                            middle: m,
                            predicate: p,
                        });
                    }
                }
            }
        }
    }
    None
}

/// Whether the three-term pattern is valid in every model.
pub fn pattern_is_valid(
    figure: u8,
    major: PropForm,
    minor: PropForm,
    conclusion: PropForm,
) -> bool {
    pattern_countermodel(figure, major, minor, conclusion).is_none()
}

/// Universe size sufficient for exact entailment checking: one witness per
/// particular premise plus one conclusion falsifier.
pub fn sufficient_universe(premises: &[Proposition]) -> usize {
    premises
        .iter()
        .filter(|p| matches!(p.form, PropForm::I | PropForm::O))
        .count()
        + 1
}

fn collect_terms(premises: &[Proposition], goal: Proposition) -> Vec<TermId> {
    let mut terms: BTreeSet<TermId> = BTreeSet::new();
    for p in premises {
        terms.extend(p.terms());
    }
    terms.extend(goal.terms());
    terms.into_iter().collect()
}

/// An assignment of extensions to terms witnessing non-entailment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Countermodel {
    pub universe_size: usize,
    pub extensions: Vec<(TermId, u32)>,
}

/// Searches universes up to `max_universe` for a model of all premises that
/// falsifies the goal.
///
/// With `max_universe >= sufficient_universe(premises)` the search is a
/// complete decision procedure. Cost is `(2^n)^k` per universe size `n`
/// with `k` distinct terms, so keep term counts small.
pub fn countermodel(
    premises: &[Proposition],
    goal: Proposition,
    max_universe: usize,
) -> Option<Countermodel> {
    let terms = collect_terms(premises, goal);
    let slot = |t: TermId| terms.binary_search(&t).expect("term collected above");
    for size in 0..=max_universe {
        let universe: u32 = (1u32 << size) - 1;
        let mut masks = vec![0u32; terms.len()];
        loop {
            let holds = |p: &Proposition| {
                form_holds(p.form, masks[slot(p.subject)], masks[slot(p.predicate)], universe)
            };
            if premises.iter().all(holds) && !holds(&goal) {
                return Some(Countermodel {
                    universe_size: size,
                    extensions: terms.iter().copied().zip(masks.iter().copied()).collect(),
                });
            }
            // Odometer over all assignments.
            let mut carry = true;
            for mask in masks.iter_mut() {
                if *mask < universe {
                    *mask += 1;
                    carry = false;
                    break;
                }
                *mask = 0;
            }
            if carry {
                break;
            }
        }
    }
    None
}

/// Whether the premises entail the goal in all universes up to
/// `max_universe` (see [`countermodel`] for completeness conditions).
pub fn entails(premises: &[Proposition], goal: Proposition, max_universe: usize) -> bool {
    countermodel(premises, goal, max_universe).is_none()
}
