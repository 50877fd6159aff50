//! A larger English-like tagged corpus with themed word associations.
//!
//! Sentences follow a handful of English clause templates built from real
//! function words and generated content words. Each sentence has a theme;
//! most of its names, adjectives and nouns come from that theme's lexicon,
//! so names end up associated with their theme's adjectives. Within a
//! lexicon, words are drawn with Zipfian frequencies.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{CorpusSlice, TaggedToken, Upos};

const ONSETS: [&str; 24] = [
    "b", "c", "d", "f", "g", "h", "l", "m", "n", "p", "r", "s", "t", "v", "w", "br", "ch", "cl", "gr", "pl", "sh", "st",
    "th", "tr",
];
const VOWELS: [&str; 8] = ["a", "e", "i", "o", "u", "ea", "ou", "ai"];
const CODAS: [&str; 9] = ["", "n", "r", "s", "t", "l", "nd", "st", "ck"];
const ADJ_SUFFIXES: [&str; 6] = ["ful", "ous", "ish", "ive", "al", "y"];
const NOUN_SUFFIXES: [&str; 4] = ["", "er", "ment", "ness"];
const NAME_SUFFIXES: [&str; 5] = ["ton", "ford", "son", "ley", "a"];

const DETERMINERS: [&str; 4] = ["the", "a", "this", "that"];
const PREPOSITIONS: [&str; 7] = ["of", "in", "with", "to", "by", "on", "from"];
const PRONOUNS: [&str; 4] = ["he", "she", "they", "it"];
const AUXILIARIES: [&str; 3] = ["was", "is", "seemed"];
const CONJUNCTIONS: [&str; 2] = ["and", "but"];

use Slot::*;

#[derive(Clone, Copy)]
enum Slot {
    Det,
    Adp,
    Pron,
    Aux,
    Conj,
    Name,
    Adj,
    Noun,
    Verb,
    Stop,
}

const TEMPLATES: [&[Slot]; 6] = [
    &[Det, Adj, Noun, Verb, Adp, Det, Noun, Stop],
    &[Name, Verb, Det, Adj, Noun, Stop],
    &[Name, Aux, Adj, Conj, Adj, Stop],
    &[Pron, Verb, Name, Adp, Det, Adj, Noun, Stop],
    &[Det, Noun, Adp, Name, Aux, Adj, Stop],
    &[Name, Conj, Name, Verb, Adp, Det, Noun, Stop],
];

/// Generator settings. The defaults give about 1,200 word types.
#[derive(Clone, Debug, PartialEq)]
pub struct EnglishLikeCorpus {
    pub themes: usize,
    pub names_per_theme: usize,
    pub adjectives_per_theme: usize,
    pub nouns_per_theme: usize,
    /// Verbs are shared by all themes.
    pub verbs: usize,
    /// Chance that a content word comes from the sentence's own theme.
    pub theme_focus: f64,
    pub zipf_exponent: f64,
    pub seed: u64,
}

impl Default for EnglishLikeCorpus {
    fn default() -> Self {
        EnglishLikeCorpus {
            themes: 8,
            names_per_theme: 40,
            adjectives_per_theme: 30,
            nouns_per_theme: 60,
            verbs: 80,
            theme_focus: 0.75,
            zipf_exponent: 1.0,
            seed: 1,
        }
    }
}

struct Lexicon {
    names: Vec<Vec<String>>,
    adjectives: Vec<Vec<String>>,
    nouns: Vec<Vec<String>>,
    verbs: Vec<String>,
}

/// Cumulative Zipf weights over `n` ranks.
fn zipf_cdf(n: usize, s: f64) -> Vec<f64> {
    let mut acc = 0.0;
    let mut cdf: Vec<f64> = (0..n)
        .map(|r| {
            acc += 1.0 / ((r + 1) as f64).powf(s);
            acc
        })
        .collect();
    for c in &mut cdf {
        *c /= acc;
    }
    cdf
}

fn draw(cdf: &[f64], rng: &mut impl Rng) -> usize {
    let u: f64 = rng.gen();
    cdf.partition_point(|&c| c < u).min(cdf.len() - 1)
}

impl EnglishLikeCorpus {
    fn lexicon(&self) -> Lexicon {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut taken: HashSet<String> = DETERMINERS
            .iter()
            .chain(&PREPOSITIONS)
            .chain(&PRONOUNS)
            .chain(&AUXILIARIES)
            .chain(&CONJUNCTIONS)
            .map(|w| w.to_string())
            .collect();
        let mut fresh = |suffixes: &[&str], rng: &mut ChaCha8Rng| loop {
            let syllables = rng.gen_range(1..=2);
            let mut w = String::new();
            for _ in 0..syllables {
                w.push_str(ONSETS[rng.gen_range(0..ONSETS.len())]);
                w.push_str(VOWELS[rng.gen_range(0..VOWELS.len())]);
                w.push_str(CODAS[rng.gen_range(0..CODAS.len())]);
            }
            w.push_str(suffixes[rng.gen_range(0..suffixes.len())]);
            if w.len() >= 3 && taken.insert(w.clone()) {
                break w;
            }
        };
        let mut themed = |count: usize, suffixes: &[&str], rng: &mut ChaCha8Rng| -> Vec<Vec<String>> {
            (0..self.themes)
                .map(|_| (0..count).map(|_| fresh(suffixes, rng)).collect())
                .collect()
        };
        let names = themed(self.names_per_theme, &NAME_SUFFIXES, &mut rng);
        let adjectives = themed(self.adjectives_per_theme, &ADJ_SUFFIXES, &mut rng);
        let nouns = themed(self.nouns_per_theme, &NOUN_SUFFIXES, &mut rng);
        let verbs = (0..self.verbs).map(|_| fresh(&["ed"], &mut rng)).collect();
        Lexicon {
            names,
            adjectives,
            nouns,
            verbs,
        }
    }

    /// Names of each theme, in lowercase.
    pub fn theme_names(&self) -> Vec<Vec<String>> {
        self.lexicon().names
    }

    /// Adjectives of each theme.
    pub fn theme_adjectives(&self) -> Vec<Vec<String>> {
        self.lexicon().adjectives
    }

    /// Generate slices whose raw text (words joined by spaces) totals about
    /// `total_bytes`. Slice `i` gets a share proportional to `i + 3` and a
    /// theme mixture that rotates with `i`.
    pub fn build_slices(&self, ids: &[&str], total_bytes: usize) -> Vec<CorpusSlice> {
        let lexicon = self.lexicon();
        let weight_sum: usize = (0..ids.len()).map(|i| i + 3).sum();
        ids.iter()
            .enumerate()
            .map(|(i, id)| {
                let bytes = total_bytes * (i + 3) / weight_sum;
                let mix: Vec<f64> = (0..self.themes).map(|t| 1.0 + ((t + i) % self.themes) as f64).collect();
                let seed = self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(i as u64 + 1);
                self.build_slice(&lexicon, id, bytes, &mix, seed)
            })
            .collect()
    }

    fn build_slice(&self, lex: &Lexicon, id: &str, bytes: usize, mix: &[f64], seed: u64) -> CorpusSlice {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut theme_cdf: Vec<f64> = mix
            .iter()
            .scan(0.0, |acc, w| {
                *acc += w;
                Some(*acc)
            })
            .collect();
        let total = *theme_cdf.last().unwrap();
        for c in &mut theme_cdf {
            *c /= total;
        }
        let s = self.zipf_exponent;
        let (name_cdf, adj_cdf, noun_cdf, verb_cdf) = (
            zipf_cdf(self.names_per_theme, s),
            zipf_cdf(self.adjectives_per_theme, s),
            zipf_cdf(self.nouns_per_theme, s),
            zipf_cdf(self.verbs, s),
        );

        let mut sentences = Vec::new();
        let mut written = 0usize;
        while written < bytes {
            let theme = draw(&theme_cdf, &mut rng);
            let template = TEMPLATES[rng.gen_range(0..TEMPLATES.len())];
            let pick_theme = |rng: &mut ChaCha8Rng| {
                if rng.gen_bool(self.theme_focus) {
                    theme
                } else {
                    rng.gen_range(0..self.themes)
                }
            };
            let sentence: Vec<TaggedToken> = template
                .iter()
                .map(|slot| {
                    let (surface, upos) = match slot {
                        Det => (DETERMINERS[rng.gen_range(0..DETERMINERS.len())].to_owned(), Upos::Det),
                        Adp => (PREPOSITIONS[rng.gen_range(0..PREPOSITIONS.len())].to_owned(), Upos::Adp),
                        Pron => (PRONOUNS[rng.gen_range(0..PRONOUNS.len())].to_owned(), Upos::Pron),
                        Aux => (AUXILIARIES[rng.gen_range(0..AUXILIARIES.len())].to_owned(), Upos::Aux),
                        Conj => (CONJUNCTIONS[rng.gen_range(0..CONJUNCTIONS.len())].to_owned(), Upos::Cconj),
                        Stop => (".".to_owned(), Upos::Punct),
                        Verb => (lex.verbs[draw(&verb_cdf, &mut rng)].clone(), Upos::Verb),
                        Name => {
                            let t = pick_theme(&mut rng);
                            let mut w = lex.names[t][draw(&name_cdf, &mut rng)].clone();
                            w[..1].make_ascii_uppercase();
                            (w, Upos::Propn)
                        }
                        Adj => {
                            let t = pick_theme(&mut rng);
                            (lex.adjectives[t][draw(&adj_cdf, &mut rng)].clone(), Upos::Adj)
                        }
                        Noun => {
                            let t = pick_theme(&mut rng);
                            (lex.nouns[t][draw(&noun_cdf, &mut rng)].clone(), Upos::Noun)
                        }
                    };
                    written += surface.len() + 1;
                    TaggedToken::new(surface, upos)
                })
                .collect();
            sentences.push(sentence);
        }
        CorpusSlice::new(id, sentences)
    }
}
