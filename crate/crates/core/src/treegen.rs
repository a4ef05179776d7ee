//! Backward generation of deduction trees, noise injection and entity
//! grounding.
//!
//! A tree starts from a root statement over two fresh terms and grows
//! backward: each expansion pops a random leaf premise, picks a mood that
//! concludes that leaf's form, introduces a globally fresh middle term and
//! replaces the leaf with the mood's two premises. After `level`
//! expansions the tree has `level + 1` leaf premises whose only derivation
//! of the root eliminates every middle term exactly once.
//!
//! Noise conditions each tie one uniformly chosen tree term to a fresh
//! term under a random form and orientation. A candidate is kept only if
//! the closure of leaves plus noise raises no contradiction and gives the
//! root no cheaper derivation than the genuine chain (no shortcuts).

use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::closure::{closure, ClosureConfig, ClosureError};
use crate::lexicon::{greek_instance_pool, EntityStyle, Lexicon};
use crate::mood::{apply_mood, moods_concluding, SyllogismMood};
use crate::prop::{contradicts, PropForm, Proposition, TermId, TermTable};

/// One backward expansion: `conclusion` was replaced by `major` and
/// `minor`, cutting `middle`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub conclusion: Proposition,
    pub mood: &'static SyllogismMood,
    pub middle: TermId,
    pub major: Proposition,
    pub minor: Proposition,
}

/// A fully expanded deduction tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicTree {
    pub root: Proposition,
    /// Expansions in creation order; reversing them gives a valid
    /// leaf-to-root derivation order.
    pub nodes: Vec<TreeNode>,
    /// Current leaf premises.
    pub leaves: Vec<Proposition>,
    pub terms: TermTable,
    pub level: u32,
}

impl LogicTree {
    /// The middle terms introduced by expansions, i.e. everything a
    /// complete derivation must eliminate.
    pub fn middles(&self) -> BTreeSet<TermId> {
        self.nodes.iter().map(|n| n.middle).collect()
    }
}

/// Generation parameters for one instance.
#[derive(Debug, Clone)]
pub struct GenConfig {
    /// Number of backward expansions (reasoning steps required).
    pub level: u32,
    /// Independent inclusion slots for noise conditions.
    pub noise_slots: u32,
    /// Per-slot inclusion probability.
    pub noise_prob: f64,
    /// Overrides the sampled noise count when set.
    pub noise_count: Option<u32>,
    pub entity_style: EntityStyle,
    /// Term cap handed to closure during noise validation.
    pub max_terms: usize,
    /// Resample attempts per noise condition.
    pub noise_retries: u32,
    /// Whole-tree regeneration attempts when noise cannot be placed.
    pub tree_retries: u32,
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        GenConfig {
            level: 1,
            noise_slots: 7,
            noise_prob: 0.3,
            noise_count: None,
            entity_style: EntityStyle::Greek,
            max_terms: 64,
            noise_retries: 50,
            tree_retries: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("no acceptable noise condition after {retries} attempts")]
    NoiseBudget { retries: u32 },
    #[error("no noise-compatible tree after {retries} attempts")]
    TreeBudget { retries: u32 },
    #[error("entity pool exhausted: need {needed} surfaces, pool has {available}")]
    EntityPool { needed: usize, available: usize },
    #[error("virtual entity style requires a lexicon")]
    LexiconRequired,
}

/// A generated instance ready for prompt rendering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptInstance {
    pub tree: LogicTree,
    /// Accepted noise conditions, in acceptance order.
    pub noise: Vec<Proposition>,
    /// Leaves and noise in presentation order (shuffled).
    pub presented: Vec<Proposition>,
    pub entity_style: EntityStyle,
}

impl PromptInstance {
    pub fn level(&self) -> u32 {
        self.tree.level
    }

    pub fn noise_count(&self) -> u32 {
        self.noise.len() as u32
    }
}

/// The premise pair that concludes `conclusion` under `mood` with the
/// given middle term; the inverse of [`apply_mood`].
pub fn premises_for(
    mood: &SyllogismMood,
    conclusion: Proposition,
    middle: TermId,
) -> (Proposition, Proposition) {
    let (s, p) = (conclusion.subject, conclusion.predicate);
    let major = match mood.figure {
        1 | 3 => Proposition::new(middle, p, mood.major_form),
        _ => Proposition::new(p, middle, mood.major_form),
    };
    let minor = match mood.figure {
        1 | 2 => Proposition::new(s, middle, mood.minor_form),
        _ => Proposition::new(middle, s, mood.minor_form),
    };
    (major, minor)
}

/// Grows a tree of the given level; all sampling comes from `rng`.
pub fn generate_tree<R: Rng + ?Sized>(level: u32, rng: &mut R) -> LogicTree {
    let mut terms = TermTable::new();
    let subject = terms.fresh("t0");
    let predicate = terms.fresh("t1");
    let root_form = *PropForm::ALL.choose(rng).expect("forms non-empty");
    let root = Proposition::new(subject, predicate, root_form);

    let mut leaves = vec![root];
    let mut nodes = Vec::with_capacity(level as usize);
    for _ in 0..level {
        let target = leaves.remove(rng.random_range(0..leaves.len()));
        let options: Vec<&'static SyllogismMood> = moods_concluding(target.form).collect();
        let mood = *options.choose(rng).expect("every form concludes some mood");
        let middle = terms.fresh(format!("t{}", terms.len()));
        let (major, minor) = premises_for(mood, target, middle);
        debug_assert_eq!(apply_mood(mood, major, minor), Ok(target));
        nodes.push(TreeNode { conclusion: target, mood, middle, major, minor });
        leaves.push(major);
        leaves.push(minor);
    }
    LogicTree { root, nodes, leaves, terms, level }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NoiseVerdict {
    Acceptable,
    /// The candidate contradicts the premise set, directly or via closure.
    Contradiction,
    /// The candidate opens a derivation of the root that skips middles.
    Shortcut,
    /// Closure blew a resource cap; treated as a rejection.
    Resource,
}

/// Checks one candidate against the full premise set.
fn validate_noise(
    premises: &[Proposition],
    root: Proposition,
    middles: &BTreeSet<TermId>,
    cfg: &ClosureConfig,
) -> NoiseVerdict {
    match closure(premises, cfg) {
        Err(ClosureError::Contradiction { .. }) => NoiseVerdict::Contradiction,
        Err(_) => NoiseVerdict::Resource,
        Ok(table) => {
            let mut saw_root = false;
            for record in table.matching(root) {
                saw_root = true;
                if !middles.is_subset(&record.eliminated) {
                    return NoiseVerdict::Shortcut;
                }
            }
            debug_assert!(saw_root, "root must stay derivable from its own leaves");
            if saw_root { NoiseVerdict::Acceptable } else { NoiseVerdict::Shortcut }
        }
    }
}

/// Adds `count` noise conditions to the tree, interning one fresh term per
/// accepted condition. Fails when some condition cannot be placed within
/// the per-condition retry budget.
pub fn inject_noise<R: Rng + ?Sized>(
    tree: &mut LogicTree,
    count: u32,
    closure_cfg: &ClosureConfig,
    retries: u32,
    rng: &mut R,
) -> Result<Vec<Proposition>, GenError> {
    let base_terms = tree.terms.len() as u32;
    let middles = tree.middles();
    let mut accepted: Vec<Proposition> = Vec::new();

    'conditions: for _ in 0..count {
        for _ in 0..retries {
            let existing = TermId(rng.random_range(0..base_terms));
            let fresh = TermId(tree.terms.len() as u32);
            let form = *PropForm::ALL.choose(rng).expect("forms non-empty");
            let (s, p) =
                if rng.random_bool(0.5) { (existing, fresh) } else { (fresh, existing) };
            let candidate = Proposition::new(s, p, form);

            if tree.leaves.iter().chain(&accepted).any(|q| contradicts(&candidate, q)) {
                log::debug!("noise candidate {candidate} contradicts a premise, resampling");
                continue;
            }
            let mut premises = tree.leaves.clone();
            premises.extend(accepted.iter().copied());
            premises.push(candidate);
            match validate_noise(&premises, tree.root, &middles, closure_cfg) {
                NoiseVerdict::Acceptable => {
                    let id = tree.terms.fresh(format!("t{}", tree.terms.len()));
                    debug_assert_eq!(id, fresh);
                    accepted.push(candidate);
                    continue 'conditions;
                }
                verdict => {
                    log::debug!("noise candidate {candidate} rejected: {verdict:?}");
                }
            }
        }
        return Err(GenError::NoiseBudget { retries });
    }
    Ok(accepted)
}

/// Rewrites every term surface with a distinct sampled entity name.
pub fn ground_entities<R: Rng + ?Sized>(
    terms: &mut TermTable,
    style: EntityStyle,
    lexicon: Option<&Lexicon>,
    rng: &mut R,
) -> Result<(), GenError> {
    let needed = terms.len();
    match style {
        EntityStyle::Greek => {
            let pool = greek_instance_pool();
            if needed > pool.len() {
                return Err(GenError::EntityPool { needed, available: pool.len() });
            }
            let picks = rand::seq::index::sample(rng, pool.len(), needed);
            for (i, pick) in picks.iter().enumerate() {
                terms.set_surface(TermId(i as u32), pool[pick]);
            }
        }
        EntityStyle::Virtual => {
            let lexicon = lexicon.ok_or(GenError::LexiconRequired)?;
            if needed > lexicon.len() {
                return Err(GenError::EntityPool { needed, available: lexicon.len() });
            }
            let picks = rand::seq::index::sample(rng, lexicon.len(), needed);
            for (i, pick) in picks.iter().enumerate() {
                terms.set_surface(TermId(i as u32), lexicon.words()[pick].clone());
            }
        }
    }
    Ok(())
}

/// Generates a complete grounded instance: tree, noise, entity surfaces
/// and presentation order. Regenerates the whole tree (up to
/// `tree_retries`) when noise cannot be placed.
pub fn build_instance<R: Rng + ?Sized>(
    cfg: &GenConfig,
    lexicon: Option<&Lexicon>,
    rng: &mut R,
) -> Result<PromptInstance, GenError> {
    let closure_cfg = ClosureConfig { max_terms: cfg.max_terms, ..ClosureConfig::default() };
    let attempts = cfg.tree_retries.max(1);
    for _ in 0..attempts {
        let mut tree = generate_tree(cfg.level, rng);
        let count = cfg.noise_count.unwrap_or_else(|| {
            (0..cfg.noise_slots).filter(|_| rng.random_bool(cfg.noise_prob)).count() as u32
        });
        match inject_noise(&mut tree, count, &closure_cfg, cfg.noise_retries, rng) {
            Ok(noise) => {
                ground_entities(&mut tree.terms, cfg.entity_style, lexicon, rng)?;
                let mut presented: Vec<Proposition> = tree.leaves.clone();
                presented.extend(noise.iter().copied());
                presented.shuffle(rng);
                return Ok(PromptInstance {
                    tree,
                    noise,
                    presented,
                    entity_style: cfg.entity_style,
                });
            }
            Err(GenError::NoiseBudget { .. }) => continue,
            Err(other) => return Err(other),
        }
    }
    Err(GenError::TreeBudget { retries: attempts })
}
