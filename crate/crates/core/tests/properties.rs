//! Randomized invariants over generation, rendering, parsing and scoring.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sorites_core::closure::{closure, ClosureConfig};
use sorites_core::lexicon::EntityStyle;
use sorites_core::parsing::{parse_formatted, parse_natural, ParsedResponse, ParsedStep};
use sorites_core::prompting::{
    attach_format_instructions, render_gold_formatted, render_gold_natural, render_judgment,
    render_proof, render_statement,
};
use sorites_core::records::GoldRow;
use sorites_core::scoring::{build_reference, score};
use sorites_core::semantics::entails;
use sorites_core::treegen::{build_instance, generate_tree, GenConfig, PromptInstance};
use sorites_core::{PropForm, Proposition, TermTable};

fn instance_for(level: u32, noise: u32, seed: u64) -> PromptInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = GenConfig {
        level,
        noise_count: Some(noise),
        entity_style: EntityStyle::Greek,
        ..GenConfig::default()
    };
    build_instance(&cfg, None, &mut rng).expect("generation within retry budget")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_expansion_is_semantically_valid(level in 0u32..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tree = generate_tree(level, &mut rng);
        for node in &tree.nodes {
            prop_assert!(
                entails(&[node.major, node.minor], node.conclusion, 3),
                "mood {} produced a non-entailed conclusion",
                node.mood.name
            );
        }
    }

    #[test]
    fn leaves_eliminate_exactly_the_middles(level in 1u32..=4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tree = generate_tree(level, &mut rng);
        let table = closure(&tree.leaves, &ClosureConfig::default()).expect("consistent leaves");
        let roots: Vec<_> = table.matching(tree.root).collect();
        prop_assert_eq!(roots.len(), 1, "root must have exactly one minimal derivation");
        prop_assert_eq!(&roots[0].eliminated, &tree.middles());
    }

    #[test]
    fn noisy_instances_never_open_shortcuts(level in 1u32..=3, seed in any::<u64>()) {
        let instance = instance_for(level, 2, seed);
        prop_assert_eq!(instance.noise.len(), 2);
        let table =
            closure(&instance.presented, &ClosureConfig::default()).expect("noise kept consistent");
        let middles = instance.tree.middles();
        for record in table.matching(instance.tree.root) {
            prop_assert_eq!(
                &record.eliminated, &middles,
                "a derivation of the root skipped required middles"
            );
        }
    }

    #[test]
    fn statement_rendering_round_trips_through_the_parser(
        form_idx in 0usize..4,
        a in 0usize..21,
        b in 0usize..21,
    ) {
        prop_assume!(a != b);
        let pool = sorites_core::lexicon::greek_instance_pool();
        let mut terms = TermTable::new();
        let s = terms.fresh(pool[a]);
        let p = terms.fresh(pool[b]);
        let prop = Proposition::new(s, p, PropForm::ALL[form_idx]);
        let text = format!("{}.", render_statement(prop, &terms));
        let entities: Vec<String> = vec![pool[a].to_owned(), pool[b].to_owned()];
        let parsed = parse_natural(&text, &entities);
        prop_assert_eq!(parsed.steps.len(), 1);
        let step = &parsed.steps[0];
        prop_assert_eq!(step.form, prop.form);
        prop_assert!(step.subject.eq_ignore_ascii_case(pool[a]));
        prop_assert!(step.predicate.eq_ignore_ascii_case(pool[b]));
    }

    #[test]
    fn gold_responses_score_perfectly(
        level in 0u32..=3,
        seed in any::<u64>(),
        judgment in any::<bool>(),
        formatted in any::<bool>(),
    ) {
        let noise = if level == 0 { 0 } else { 1 };
        let instance = instance_for(level, noise, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
        let prompt = if judgment {
            render_judgment(&instance, &mut rng)
        } else {
            render_proof(&instance)
        };
        let prompt = if formatted { attach_format_instructions(prompt) } else { prompt };
        let gold_text = if formatted {
            render_gold_formatted(&instance, prompt.gold_verdict)
        } else {
            render_gold_natural(&instance, prompt.gold_verdict)
        };
        let gold = GoldRow::assemble("q".into(), &instance, &prompt, gold_text.clone(), seed, 0);
        let refs = build_reference(&gold, &ClosureConfig::default()).expect("gold is resolvable");
        let parsed = if formatted {
            parse_formatted(&gold_text)
        } else {
            parse_natural(&gold_text, &gold.entities)
        };
        let scores = score(&parsed, &refs);
        prop_assert_eq!(scores.step_score, 1.0, "gold: {}", gold_text);
        prop_assert_eq!(scores.result_score, 1, "gold: {}", gold_text);
        prop_assert_eq!(scores.intent_score, 1);
        prop_assert_eq!(scores.wrong_steps, 0);
        prop_assert_eq!(scores.noise_steps, 0);
        prop_assert_eq!(scores.extra_steps, 0, "gold: {}", gold_text);
    }

    #[test]
    fn scoring_is_monotone_under_appended_steps(
        seed in any::<u64>(),
        picks in proptest::collection::vec((0usize..6, 0usize..6, 0usize..4), 0..10),
    ) {
        let instance = instance_for(2, 1, seed);
        let prompt = render_proof(&instance);
        let gold_text = render_gold_natural(&instance, None);
        let gold = GoldRow::assemble("q".into(), &instance, &prompt, gold_text, seed, 0);
        let refs = build_reference(&gold, &ClosureConfig::default()).expect("resolvable");

        let mut surfaces = gold.entities.clone();
        surfaces.push("UNKNOWN".into());
        let steps: Vec<ParsedStep> = picks
            .iter()
            .filter(|(s, p, _)| surfaces[*s % surfaces.len()] != surfaces[*p % surfaces.len()])
            .map(|(s, p, f)| ParsedStep {
                subject: surfaces[*s % surfaces.len()].clone(),
                predicate: surfaces[*p % surfaces.len()].clone(),
                form: PropForm::ALL[*f],
                span: (0, 0),
            })
            .collect();

        let mut last = score(
            &ParsedResponse { steps: Vec::new(), verdict: None, intent_ok: true },
            &refs,
        );
        for n in 1..=steps.len() {
            let parsed = ParsedResponse {
                steps: steps[..n].to_vec(),
                verdict: None,
                intent_ok: true,
            };
            let current = score(&parsed, &refs);
            prop_assert!(current.step_score >= last.step_score, "step score regressed");
            prop_assert!(current.wrong_steps >= last.wrong_steps);
            prop_assert!(current.noise_steps >= last.noise_steps);
            prop_assert!(current.extra_steps >= last.extra_steps);
            last = current;
        }
    }
}
