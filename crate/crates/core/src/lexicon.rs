//! Entity surfaces for grounding terms: Greek-letter names or generated
//! virtual nouns.
//!
//! Greek names come from a fixed pool; the last three are reserved for
//! worked examples inside instruction blocks so that an instance can never
//! collide with its own few-shot demonstration. Virtual nouns are
//! pronounceable pseudo-words, filtered against a list of common English
//! words so no term accidentally carries real-world meaning.

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::io;
use std::path::Path;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The 24 Greek letter names, uppercase.
pub const GREEK_NAMES: [&str; 24] = [
    "ALPHA", "BETA", "GAMMA", "DELTA", "EPSILON", "ZETA", "ETA", "THETA", "IOTA", "KAPPA",
    "LAMBDA", "MU", "NU", "XI", "OMICRON", "PI", "RHO", "SIGMA", "TAU", "UPSILON", "PHI", "CHI",
    "PSI", "OMEGA",
];

/// Names available to instances; CHI, PSI and OMEGA are reserved for the
/// worked examples embedded in format-instruction blocks.
pub fn greek_instance_pool() -> &'static [&'static str] {
    &GREEK_NAMES[..21]
}

/// How terms are grounded to surfaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntityStyle {
    /// Uppercase Greek letter names.
    Greek,
    /// Generated pronounceable pseudo-words.
    Virtual,
}

impl FromStr for EntityStyle {
    type Err = String;

    fn from_str(s: &str) -> Result<EntityStyle, String> {
        match s.to_ascii_lowercase().as_str() {
            "greek" => Ok(EntityStyle::Greek),
            "virtual" => Ok(EntityStyle::Virtual),
            other => Err(format!("unknown entity style '{other}' (expected greek or virtual)")),
        }
    }
}

impl fmt::Display for EntityStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntityStyle::Greek => write!(f, "greek"),
            EntityStyle::Virtual => write!(f, "virtual"),
        }
    }
}

/// A pool of distinct virtual-noun surfaces.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Lexicon {
    words: Vec<String>,
}

impl Lexicon {
    pub fn new(words: Vec<String>) -> Lexicon {
        Lexicon { words }
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Reads a lexicon from newline-delimited text, skipping blank lines.
    pub fn load(path: &Path) -> io::Result<Lexicon> {
        let text = fs::read_to_string(path)?;
        let words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(str::to_owned)
            .collect();
        Ok(Lexicon { words })
    }

    /// Writes the lexicon as newline-delimited text.
    pub fn save(&self, path: &Path) -> io::Result<()> {
        let mut text = self.words.join("\n");
        text.push('\n');
        fs::write(path, text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexiconError {
    #[error("could not assemble {requested} distinct pseudo-words in {attempts} attempts")]
    Budget { requested: usize, attempts: usize },
}

const ONSETS: &[&str] = &[
    "b", "bl", "br", "c", "ch", "cl", "cr", "d", "dr", "f", "fl", "fr", "g", "gl", "gr", "h",
    "j", "k", "l", "m", "n", "p", "ph", "pl", "pr", "qu", "r", "s", "sh", "sl", "sn", "sp", "st",
    "sw", "t", "th", "tr", "v", "w", "z",
];
const VOWELS: &[&str] = &["a", "e", "i", "o", "u", "ai", "ea", "ee", "io", "oa", "ou"];
const CODAS: &[&str] = &["", "", "n", "r", "s", "l", "t", "m", "x", "st", "nd", "rn", "ck"];

/// One candidate pseudo-word: two to four onset+vowel syllables plus an
/// optional final coda. Length is not yet constrained here.
pub fn pseudo_word<R: Rng + ?Sized>(rng: &mut R) -> String {
    let syllables = rng.random_range(2..=4u32);
    let mut word = String::new();
    for _ in 0..syllables {
        word.push_str(ONSETS.choose(rng).expect("onsets non-empty"));
        word.push_str(VOWELS.choose(rng).expect("vowels non-empty"));
    }
    word.push_str(CODAS.choose(rng).expect("codas non-empty"));
    word
}

/// Builds `size` distinct pseudo-words of 4 to 14 letters, none of which
/// appears in `avoid` (compared case-insensitively).
pub fn build_virtual_lexicon<R: Rng + ?Sized>(
    size: usize,
    avoid: &HashSet<String>,
    rng: &mut R,
) -> Result<Lexicon, LexiconError> {
    let budget = size.saturating_mul(200).max(1000);
    let mut seen: HashSet<String> = HashSet::with_capacity(size);
    let mut words: Vec<String> = Vec::with_capacity(size);
    for _ in 0..budget {
        if words.len() == size {
            break;
        }
        let word = pseudo_word(rng);
        if word.len() < 4 || word.len() > 14 {
            continue;
        }
        if avoid.contains(&word) || !seen.insert(word.clone()) {
            continue;
        }
        words.push(word);
    }
    if words.len() < size {
        return Err(LexiconError::Budget { requested: size, attempts: budget });
    }
    Ok(Lexicon { words })
}

/// Common English words that virtual nouns must not collide with.
pub fn default_word_set() -> &'static HashSet<String> {
    static SET: OnceLock<HashSet<String>> = OnceLock::new();
    SET.get_or_init(|| {
        DEFAULT_WORD_LIST
            .split_ascii_whitespace()
            .map(str::to_owned)
            .collect()
    })
}

const DEFAULT_WORD_LIST: &str = "
the of and to in is you that it he was for on are as with his they at be this
have from or one had by word but not what all were we when your can said there
use an each which she do how their if will up other about out many then them
these so some her would make like him into time has look two more write go see
number no way could people my than first water been call who oil its now find
long down day did get come made may part over new sound take only little work
know place year live me back give most very after thing our just name good
sentence man think say great where help through much before line right too
mean old any same tell boy follow came want show also around form three small
set put end does another well large must big even such because turn here why
ask went men read need land different home us move try kind hand picture again
change off play spell air away animal house point page letter mother answer
found study still learn should america world high every near add food between
own below country plant last school father keep tree never start city earth
eye light thought head under story saw left dont few while along might close
something seem next hard open example begin life always those both paper
together got group often run important until children side feet car mile night
walk white sea began grow took river four carry state once book hear stop
without second later miss idea enough eat face watch far real almost let above
girl sometimes mountain cut young talk soon list song being leave family body
music color stand sun question fish area mark dog horse bird problem complete
room knew since ever piece told usually didnt friend easy heard order red door
sure become top ship across today during short better best however low hour
black product happened whole measure remember early wave reached listen wind
rock space covered fast several hold himself toward five step morning passed
vowel true hundred against pattern numeral table north slowly money map farm
pulled draw voice seen cold cried plan notice south sing war ground fall king
town unit figure certain field travel wood fire upon done english road half
ten fly gave box finally wait correct oh quickly person became shown minute
strong verb star front feel fact inch street decided contain course surface
produce building ocean class note nothing rest carefully scientist inside
wheel stay green known island week less machine base ago stood plane system
behind ran round boat game force brought understand warm common bring explain
dry though language shape deep thousand yes clear equation yet government
filled heat full hot check object am rule among noun power cannot able six
size dark ball material special heavy fine pair circle include built cat cow
pig hen goat sheep whale snake mouse lion tiger bear wolf fox deer frog duck
goose owl bee ant spider worm apple bread milk cheese butter sugar salt meat
rice corn bean egg cake tea coffee wine glass cup plate knife fork spoon chair
desk bed lamp clock phone computer screen wall floor roof garden gate fence
bridge tower castle church temple market shop store price coin gold silver
iron steel stone sand clay cloth silk wool leather shoe hat coat dress shirt
sock glove ring bag key lock rain snow cloud storm thunder valley hill forest
lake stream beach shore grass leaf root branch seed flower fruit berry nut
wheat honey spice herb doctor nurse teacher student farmer baker singer dancer
writer painter driver sailor soldier guard judge lawyer merchant trader smith
miller hunter keeper uncle aunt cousin brother sister parent baby adult elder
chief queen prince princess knight squire servant guest stranger neighbor
crowd team club army navy fleet troop band choir chorus melody rhythm drum
flute harp horn bell whistle engine motor wheelbarrow cart wagon sled canoe
ferry train truck rocket ladder rope chain nail hammer saw drill wrench shovel
broom bucket basket barrel bottle jar pot pan oven stove fridge mirror towel
soap brush comb razor needle thread button zipper pocket sleeve collar belt
scarf blanket pillow mattress curtain carpet shelf drawer cabinet trunk chest
";

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn greek_pool_reserves_example_names() {
        assert_eq!(GREEK_NAMES.len(), 24);
        let pool = greek_instance_pool();
        assert_eq!(pool.len(), 21);
        for reserved in ["CHI", "PSI", "OMEGA"] {
            assert!(!pool.contains(&reserved), "{reserved} must stay out of the pool");
            assert!(GREEK_NAMES.contains(&reserved));
        }
        let distinct: HashSet<&str> = GREEK_NAMES.iter().copied().collect();
        assert_eq!(distinct.len(), 24);
        assert!(GREEK_NAMES.iter().all(|n| n.chars().all(|c| c.is_ascii_uppercase())));
    }

    #[test]
    fn virtual_lexicon_respects_length_and_avoid_list() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let lexicon = build_virtual_lexicon(300, default_word_set(), &mut rng).unwrap();
        assert_eq!(lexicon.len(), 300);
        let distinct: HashSet<&String> = lexicon.words().iter().collect();
        assert_eq!(distinct.len(), 300);
        for word in lexicon.words() {
            assert!((4..=14).contains(&word.len()), "bad length: {word}");
            assert!(word.chars().all(|c| c.is_ascii_lowercase()), "bad chars: {word}");
            assert!(!default_word_set().contains(word), "real word leaked: {word}");
        }
    }

    #[test]
    fn virtual_lexicon_is_seed_deterministic() {
        let build = || {
            let mut rng = ChaCha8Rng::seed_from_u64(99);
            build_virtual_lexicon(50, default_word_set(), &mut rng).unwrap()
        };
        assert_eq!(build(), build());
    }

    #[test]
    fn avoid_list_actually_filters() {
        // Build once, then rebuild with the first produced word forbidden.
        let first = {
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            build_virtual_lexicon(10, &HashSet::new(), &mut rng).unwrap().words()[0].clone()
        };
        let mut avoid = HashSet::new();
        avoid.insert(first.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rebuilt = build_virtual_lexicon(10, &avoid, &mut rng).unwrap();
        assert!(!rebuilt.words().contains(&first));
    }

    #[test]
    fn lexicon_round_trips_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("lexicon.txt");
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let lexicon = build_virtual_lexicon(20, default_word_set(), &mut rng).unwrap();
        lexicon.save(&path).unwrap();
        assert_eq!(Lexicon::load(&path).unwrap(), lexicon);
    }

    #[test]
    fn empty_request_yields_empty_lexicon() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let lexicon = build_virtual_lexicon(0, default_word_set(), &mut rng).unwrap();
        assert!(lexicon.is_empty());
    }
}
