//! The `generate` subcommand: backward-generated prompts plus gold rows.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use sorites_core::lexicon::{build_virtual_lexicon, default_word_set, EntityStyle, Lexicon};
use sorites_core::prompting::{
    attach_format_instructions, render_gold_formatted, render_gold_natural, render_judgment,
    render_proof, QuestionType, ResponseMode,
};
use sorites_core::records::{write_jsonl, GoldRow, PromptRow};
use sorites_core::treegen::{build_instance, GenConfig};

/// Per-level prompt counts for the standard 2000-prompt evaluation mix
/// over levels 1-10.
const EVAL_COUNTS: [(u32, usize); 10] = [
    (1, 194),
    (2, 204),
    (3, 204),
    (4, 216),
    (5, 164),
    (6, 212),
    (7, 184),
    (8, 206),
    (9, 212),
    (10, 204),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Profile {
    /// The fixed 2000-prompt evaluation mix over levels 1-10.
    Eval,
    /// Levels drawn uniformly from [min-level, max-level].
    Uniform,
    /// Every prompt at --level.
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum QuestionTypeArg {
    Proof,
    Judgment,
    /// A fair coin per prompt.
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Natural,
    Formatted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StyleArg {
    Greek,
    Virtual,
}

#[derive(Args)]
pub struct GenerateArgs {
    /// Master seed; instance i draws from stream i+1, the lexicon from stream 0.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Profile::Fixed)]
    profile: Profile,
    /// Number of prompts (fixed and uniform profiles; eval is always 2000).
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// Reasoning level for the fixed profile.
    #[arg(long, default_value_t = 1)]
    level: u32,
    /// Lowest level for the uniform profile.
    #[arg(long, default_value_t = 1)]
    min_level: u32,
    /// Highest level for the uniform profile.
    #[arg(long, default_value_t = 10)]
    max_level: u32,
    /// Independent inclusion slots for noise conditions.
    #[arg(long, default_value_t = 7)]
    noise_slots: u32,
    /// Per-slot inclusion probability.
    #[arg(long, default_value_t = 0.3)]
    noise_prob: f64,
    /// Exact noise conditions per prompt, overriding the slot sampling.
    #[arg(long)]
    noise_count: Option<u32>,
    #[arg(long, value_enum, default_value_t = StyleArg::Greek)]
    entity_style: StyleArg,
    #[arg(long, value_enum, default_value_t = QuestionTypeArg::Proof)]
    question_type: QuestionTypeArg,
    #[arg(long, value_enum, default_value_t = ModeArg::Natural)]
    mode: ModeArg,
    /// Word list for virtual entities: loaded when the file exists,
    /// otherwise built fresh and saved there.
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Size of a freshly built virtual lexicon.
    #[arg(long, default_value_t = 1000)]
    lexicon_size: usize,
    /// Output path for prompt rows.
    #[arg(long)]
    out: PathBuf,
    /// Output path for gold rows.
    #[arg(long)]
    gold: PathBuf,
}

fn prepare_lexicon(args: &GenerateArgs) -> Result<Option<Lexicon>> {
    if args.entity_style != StyleArg::Virtual {
        return Ok(None);
    }
    if let Some(path) = &args.lexicon {
        if path.exists() {
            let lexicon = Lexicon::load(path)
                .with_context(|| format!("loading lexicon from {}", path.display()))?;
            return Ok(Some(lexicon));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    rng.set_stream(0);
    let lexicon = build_virtual_lexicon(args.lexicon_size, default_word_set(), &mut rng)
        .context("building virtual lexicon")?;
    if let Some(path) = &args.lexicon {
        lexicon
            .save(path)
            .with_context(|| format!("saving lexicon to {}", path.display()))?;
    }
    Ok(Some(lexicon))
}

pub fn run(args: GenerateArgs) -> Result<()> {
    if args.min_level > args.max_level {
        bail!("--min-level must not exceed --max-level");
    }
    let lexicon = prepare_lexicon(&args)?;

    let eval_levels: Vec<u32> = EVAL_COUNTS
        .iter()
        .flat_map(|&(level, n)| std::iter::repeat_n(level, n))
        .collect();
    let total = match args.profile {
        Profile::Eval => eval_levels.len(),
        Profile::Uniform | Profile::Fixed => args.count,
    };

    let rows: Result<Vec<(PromptRow, GoldRow)>> = (0..total)
        .into_par_iter()
        .map(|index| {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            rng.set_stream(index as u64 + 1);
            let level = match args.profile {
                Profile::Eval => eval_levels[index],
                Profile::Fixed => args.level,
                Profile::Uniform => rng.random_range(args.min_level..=args.max_level),
            };
            let cfg = GenConfig {
                level,
                noise_slots: args.noise_slots,
                noise_prob: args.noise_prob,
                noise_count: args.noise_count,
                entity_style: match args.entity_style {
                    StyleArg::Greek => EntityStyle::Greek,
                    StyleArg::Virtual => EntityStyle::Virtual,
                },
                ..GenConfig::default()
            };
            let instance = build_instance(&cfg, lexicon.as_ref(), &mut rng)
                .with_context(|| format!("generating instance {index} at level {level}"))?;
            let question_type = match args.question_type {
                QuestionTypeArg::Proof => QuestionType::Proof,
                QuestionTypeArg::Judgment => QuestionType::Judgment,
                QuestionTypeArg::Mixed => {
                    if rng.random_bool(0.5) {
                        QuestionType::Judgment
                    } else {
                        QuestionType::Proof
                    }
                }
            };
            let prompt = match question_type {
                QuestionType::Proof => render_proof(&instance),
                QuestionType::Judgment => render_judgment(&instance, &mut rng),
            };
            let prompt = match args.mode {
                ModeArg::Natural => prompt,
                ModeArg::Formatted => attach_format_instructions(prompt),
            };
            let gold_text = match prompt.mode {
                ResponseMode::Natural => render_gold_natural(&instance, prompt.gold_verdict),
                ResponseMode::Formatted => render_gold_formatted(&instance, prompt.gold_verdict),
            };
            let id = format!("q{index:06}");
            let row = PromptRow {
                id: id.clone(),
                text: prompt.text.clone(),
                question_type: prompt.question_type,
                mode: prompt.mode,
                level,
                noise_count: instance.noise.len() as u32,
            };
            let gold = GoldRow::assemble(id, &instance, &prompt, gold_text, args.seed, index as u64);
            Ok((row, gold))
        })
        .collect();
    let (prompts, golds): (Vec<PromptRow>, Vec<GoldRow>) = rows?.into_iter().unzip();

    write_jsonl(&args.out, &prompts)
        .with_context(|| format!("writing prompts to {}", args.out.display()))?;
    write_jsonl(&args.gold, &golds)
        .with_context(|| format!("writing gold rows to {}", args.gold.display()))?;
    println!(
        "wrote {} prompts to {} and gold rows to {}",
        prompts.len(),
        args.out.display(),
        args.gold.display()
    );
    Ok(())
}
