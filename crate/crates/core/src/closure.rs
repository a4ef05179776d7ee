//! Deductive closure of a premise set under the valid moods, tracking which
//! middle terms each derived statement eliminates.
//!
//! Every statement in the closure is stored as a [`RelationRecord`] under
//! its term pair. A record's `eliminated` set names the middle terms
//! consumed by some derivation of the statement; premises carry the empty
//! set, and a one-step inference takes the union of its premises' sets plus
//! the middle it cuts. Only minimal sets are kept per pair and form: a
//! record whose set is a superset of a sibling's is redundant and pruned.
//!
//! Symmetric forms (E, I) are stored in a canonical orientation so that a
//! statement and its swap land in the same bucket; no conversion inference
//! is ever applied. Insertion fails fast when a derived statement
//! contradicts a stored one.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::mood::{match_moods, middle_term};
use crate::prop::{contradicts, PropForm, Proposition, TermId};

/// A statement over a term pair plus one minimal set of middles eliminated
/// to reach it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationRecord {
    pub form: PropForm,
    pub eliminated: BTreeSet<TermId>,
}

/// Resource limits for closure computation.
#[derive(Debug, Clone, Copy)]
pub struct ClosureConfig {
    /// Maximum distinct terms accepted in the premise set.
    pub max_terms: usize,
    /// Hard cap on stored records, a defensive bound on runaway growth.
    pub max_records: usize,
}

impl Default for ClosureConfig {
    fn default() -> ClosureConfig {
        ClosureConfig { max_terms: 64, max_records: 1_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosureError {
    /// Two statements in the closure are contradictories.
    #[error("contradictory statements {a} and {b}")]
    Contradiction { a: Proposition, b: Proposition },
    /// The premise set mentions more terms than the configured cap.
    #[error("premises mention {count} terms, more than the cap of {cap}")]
    TooManyTerms { count: usize, cap: usize },
    /// The closure grew past the configured record cap.
    #[error("closure exceeded {cap} records")]
    TooManyRecords { cap: usize },
}

/// The closure of a premise set: statements bucketed by term pair, each
/// with its antichain of minimal elimination sets.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelationTable {
    buckets: BTreeMap<(TermId, TermId), Vec<RelationRecord>>,
    records: usize,
}

impl RelationTable {
    /// Records stored under the canonical bucket of `prop` with its form.
    ///
    /// Symmetric forms are canonicalised, so either orientation of an E or
    /// I statement finds the same records.
    pub fn matching(&self, prop: Proposition) -> impl Iterator<Item = &RelationRecord> {
        let canonical = prop.canonical();
        self.buckets
            .get(&(canonical.subject, canonical.predicate))
            .into_iter()
            .flatten()
            .filter(move |r| r.form == canonical.form)
    }

    /// Whether the statement is in the closure, up to E/I symmetry.
    pub fn contains(&self, prop: Proposition) -> bool {
        self.matching(prop).next().is_some()
    }

    /// All records under the exact (canonical) pair, any form.
    pub fn pair_records(&self, subject: TermId, predicate: TermId) -> &[RelationRecord] {
        self.buckets
            .get(&(subject, predicate))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Iterates `(subject, predicate, record)` over the whole table.
    pub fn iter(&self) -> impl Iterator<Item = (TermId, TermId, &RelationRecord)> {
        self.buckets
            .iter()
            .flat_map(|(&(s, p), recs)| recs.iter().map(move |r| (s, p, r)))
    }

    /// Total stored records.
    pub fn record_count(&self) -> usize {
        self.records
    }
}

/// Worklist state: an append-only entry list with liveness flags, plus an
/// index from term pairs to entry positions.
struct Engine {
    props: Vec<Proposition>,
    elims: Vec<BTreeSet<TermId>>,
    alive: Vec<bool>,
    index: BTreeMap<(TermId, TermId), Vec<usize>>,
    cfg: ClosureConfig,
}

enum Outcome {
    Added(usize),
    Redundant,
}

impl Engine {
    fn new(cfg: ClosureConfig) -> Engine {
        Engine { props: Vec::new(), elims: Vec::new(), alive: Vec::new(), index: BTreeMap::new(), cfg }
    }

    fn insert(
        &mut self,
        prop: Proposition,
        eliminated: BTreeSet<TermId>,
    ) -> Result<Outcome, ClosureError> {
        let prop = prop.canonical();
        // A derivation that consumed one of its own endpoints as a middle
        // is degenerate (only possible with cyclic premises); drop it.
        if eliminated.contains(&prop.subject) || eliminated.contains(&prop.predicate) {
            return Ok(Outcome::Redundant);
        }
        let key = (prop.subject, prop.predicate);
        let negated_form = prop.form.negated();
        if let Some(slots) = self.index.get(&key) {
            for &i in slots {
                if self.alive[i] && self.props[i].form == negated_form {
                    return Err(ClosureError::Contradiction { a: prop, b: self.props[i] });
                }
            }
            // An existing record with a subset elimination set subsumes the
            // new one (equal sets included).
            for &i in slots {
                if self.alive[i]
                    && self.props[i].form == prop.form
                    && self.elims[i].is_subset(&eliminated)
                {
                    return Ok(Outcome::Redundant);
                }
            }
        }
        // The new record survives; retire any strict supersets it obsoletes.
        let obsolete: Vec<usize> = self
            .index
            .get(&key)
            .into_iter()
            .flatten()
            .copied()
            .filter(|&i| {
                self.alive[i]
                    && self.props[i].form == prop.form
                    && eliminated.is_subset(&self.elims[i])
            })
            .collect();
        for i in obsolete {
            self.alive[i] = false;
        }
        if self.props.len() >= self.cfg.max_records {
            return Err(ClosureError::TooManyRecords { cap: self.cfg.max_records });
        }
        let slot = self.props.len();
        self.props.push(prop);
        self.elims.push(eliminated);
        self.alive.push(true);
        self.index.entry(key).or_default().push(slot);
        Ok(Outcome::Added(slot))
    }

    fn into_table(self) -> RelationTable {
        let mut table = RelationTable::default();
        for i in 0..self.props.len() {
            if self.alive[i] {
                let p = self.props[i];
                table
                    .buckets
                    .entry((p.subject, p.predicate))
                    .or_default()
                    .push(RelationRecord { form: p.form, eliminated: self.elims[i].clone() });
                table.records += 1;
            }
        }
        table
    }
}

/// Computes the deductive closure of `premises`.
///
/// Fails with [`ClosureError::Contradiction`] when any two premises are
/// contradictories or when a derived statement contradicts a stored one,
/// and with a resource error when the term or record caps are exceeded.
pub fn closure(
    premises: &[Proposition],
    cfg: &ClosureConfig,
) -> Result<RelationTable, ClosureError> {
    let terms: BTreeSet<TermId> = premises.iter().flat_map(|p| p.terms()).collect();
    if terms.len() > cfg.max_terms {
        return Err(ClosureError::TooManyTerms { count: terms.len(), cap: cfg.max_terms });
    }
    for (i, a) in premises.iter().enumerate() {
        for b in &premises[i + 1..] {
            if contradicts(a, b) {
                return Err(ClosureError::Contradiction { a: *a, b: *b });
            }
        }
    }

    let mut engine = Engine::new(*cfg);
    let mut queue: VecDeque<usize> = VecDeque::new();
    for premise in premises {
        if let Outcome::Added(slot) = engine.insert(*premise, BTreeSet::new())? {
            queue.push_back(slot);
        }
    }

    while let Some(i) = queue.pop_front() {
        if !engine.alive[i] {
            continue;
        }
        // Pair the fresh record with every live record, including those
        // added after it was queued; new/new pairs meet when the later of
        // the two is dequeued.
        for j in 0..engine.props.len() {
            if i == j || !engine.alive[j] || !engine.alive[i] {
                continue;
            }
            let (pi, pj) = (engine.props[i], engine.props[j]);
            for (_, conclusion) in match_moods(pi, pj) {
                let middle = middle_term(pi, pj).expect("mood match shares one term");
                let mut eliminated: BTreeSet<TermId> =
                    engine.elims[i].union(&engine.elims[j]).copied().collect();
                eliminated.insert(middle);
                if let Outcome::Added(slot) = engine.insert(conclusion, eliminated)? {
                    queue.push_back(slot);
                }
            }
        }
    }
    Ok(engine.into_table())
}

/// Whether `goal` is derivable from `premises`, up to E/I symmetry.
pub fn derivable(
    premises: &[Proposition],
    goal: Proposition,
    cfg: &ClosureConfig,
) -> Result<bool, ClosureError> {
    Ok(closure(premises, cfg)?.contains(goal))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(n: u32) -> TermId {
        TermId(n)
    }

    fn prop(s: u32, p: u32, form: PropForm) -> Proposition {
        Proposition::new(t(s), t(p), form)
    }

    fn a(s: u32, p: u32) -> Proposition {
        prop(s, p, PropForm::A)
    }

    fn elim(table: &RelationTable, goal: Proposition) -> Vec<Vec<u32>> {
        let mut sets: Vec<Vec<u32>> = table
            .matching(goal)
            .map(|r| r.eliminated.iter().map(|t| t.0).collect())
            .collect();
        sets.sort();
        sets
    }

    #[test]
    fn universal_chain_eliminates_every_middle() {
        // 0 -> 1 -> 2 -> 3 under A; the worked three-step chain.
        let premises = [a(0, 1), a(1, 2), a(2, 3)];
        let table = closure(&premises, &ClosureConfig::default()).unwrap();
        assert_eq!(elim(&table, a(0, 2)), vec![vec![1]]);
        assert_eq!(elim(&table, a(1, 3)), vec![vec![2]]);
        assert_eq!(elim(&table, a(0, 3)), vec![vec![1, 2]]);
        assert!(!table.contains(prop(0, 3, PropForm::I)), "no existential import");
        assert!(!table.contains(a(3, 0)));
        // 3 premises + 3 derived statements.
        assert_eq!(table.record_count(), 6);
    }

    #[test]
    fn premises_carry_empty_elimination_sets() {
        let table = closure(&[a(0, 1)], &ClosureConfig::default()).unwrap();
        assert_eq!(elim(&table, a(0, 1)), vec![Vec::<u32>::new()]);
    }

    #[test]
    fn symmetric_forms_are_found_in_either_orientation() {
        // Celarent: E(1,2), A(0,1) gives E(0,2).
        let premises = [prop(2, 1, PropForm::E), a(0, 1)];
        let table = closure(&premises, &ClosureConfig::default()).unwrap();
        assert!(table.contains(prop(0, 2, PropForm::E)));
        assert!(table.contains(prop(2, 0, PropForm::E)));
        assert_eq!(elim(&table, prop(2, 0, PropForm::E)), vec![vec![1]]);
    }

    #[test]
    fn particular_premises_chain_through_darii() {
        // A(0,1) with I(2,0) gives I(2,1), stored canonically.
        let premises = [a(0, 1), prop(2, 0, PropForm::I)];
        let table = closure(&premises, &ClosureConfig::default()).unwrap();
        assert!(table.contains(prop(2, 1, PropForm::I)));
        assert!(table.contains(prop(1, 2, PropForm::I)));
    }

    #[test]
    fn contradictory_premises_are_rejected_before_closure() {
        let err = closure(&[a(0, 1), prop(0, 1, PropForm::O)], &ClosureConfig::default());
        assert!(matches!(err, Err(ClosureError::Contradiction { .. })));
        // E/I contradiction across orientations.
        let err = closure(
            &[prop(0, 1, PropForm::E), prop(1, 0, PropForm::I)],
            &ClosureConfig::default(),
        );
        assert!(matches!(err, Err(ClosureError::Contradiction { .. })));
    }

    #[test]
    fn derived_contradictions_are_caught() {
        // The chain proves A(0,2); the O premise contradicts it.
        let premises = [a(0, 1), a(1, 2), prop(0, 2, PropForm::O)];
        let err = closure(&premises, &ClosureConfig::default());
        assert!(matches!(err, Err(ClosureError::Contradiction { .. })));
    }

    #[test]
    fn superset_elimination_records_are_pruned() {
        // Two routes from 0 to 2: through {1,3} (discovered first from this
        // premise order) and through {1} alone. Only the minimal record
        // survives regardless of discovery order.
        let premises = [a(1, 3), a(3, 2), a(0, 1), a(1, 2)];
        let table = closure(&premises, &ClosureConfig::default()).unwrap();
        assert_eq!(elim(&table, a(0, 2)), vec![vec![1]]);
    }

    #[test]
    fn incomparable_elimination_sets_coexist() {
        // A diamond: 0 reaches 3 through 1 or through 2.
        let premises = [a(0, 1), a(1, 3), a(0, 2), a(2, 3)];
        let table = closure(&premises, &ClosureConfig::default()).unwrap();
        assert_eq!(elim(&table, a(0, 3)), vec![vec![1], vec![2]]);
    }

    #[test]
    fn universal_cycle_closes_without_degenerate_records() {
        let premises = [a(0, 1), a(1, 2), a(2, 0)];
        let table = closure(&premises, &ClosureConfig::default()).unwrap();
        assert_eq!(elim(&table, a(0, 2)), vec![vec![1]]);
        assert_eq!(elim(&table, a(1, 0)), vec![vec![2]]);
        assert_eq!(elim(&table, a(2, 1)), vec![vec![0]]);
        // Three premises plus the three reverse arcs; nothing degenerate.
        assert_eq!(table.record_count(), 6);
        for (s, p, record) in table.iter() {
            assert!(!record.eliminated.contains(&s));
            assert!(!record.eliminated.contains(&p));
        }
    }

    #[test]
    fn term_cap_is_enforced() {
        let premises = [a(0, 1), a(2, 3)];
        let err = closure(&premises, &ClosureConfig { max_terms: 3, ..Default::default() });
        assert_eq!(err, Err(ClosureError::TooManyTerms { count: 4, cap: 3 }));
    }

    #[test]
    fn derivable_answers_up_to_symmetry() {
        let premises = [prop(0, 1, PropForm::I)];
        let cfg = ClosureConfig::default();
        assert!(derivable(&premises, prop(1, 0, PropForm::I), &cfg).unwrap());
        assert!(!derivable(&premises, prop(0, 1, PropForm::A), &cfg).unwrap());
    }
}
