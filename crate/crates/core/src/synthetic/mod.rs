//! Seeded synthetic corpora with known topic structure.
//!
//! Each topic owns a disjoint set of pseudo-words, and every sentence draws
//! all of its words from a single topic. Within-topic words therefore share
//! contexts and cross-topic words never do, which gives trainers and
//! clustering a ground truth to be checked against.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{CorpusSlice, TaggedToken, Upos};

mod english;

pub use english::EnglishLikeCorpus;

const ONSETS: [&[&str]; 8] = [
    &["b", "d", "g"],
    &["k", "t", "p"],
    &["m", "n", "l"],
    &["s", "z", "v"],
    &["r", "h", "w"],
    &["f", "j", "y"],
    &["bl", "dr", "gr"],
    &["st", "sk", "sp"],
];
const VOWELS: [&str; 5] = ["a", "e", "i", "o", "u"];

#[derive(Clone, Debug, PartialEq)]
pub struct TopicCorpus {
    pub topics: usize,
    pub words_per_topic: usize,
    /// Sentences generated for each topic; missing entries repeat the last one.
    pub sentences_per_topic: Vec<usize>,
    pub sentence_len: usize,
    /// The first `propn_per_topic` words of each topic are tagged PROPN.
    pub propn_per_topic: usize,
    /// The next `adj_per_topic` words are tagged ADJ; the rest NOUN.
    pub adj_per_topic: usize,
}

impl Default for TopicCorpus {
    /// Two topics of 20 words, 200 ten-word sentences each.
    fn default() -> Self {
        TopicCorpus {
            topics: 2,
            words_per_topic: 20,
            sentences_per_topic: vec![200],
            sentence_len: 10,
            propn_per_topic: 5,
            adj_per_topic: 5,
        }
    }
}

impl TopicCorpus {
    /// The `index`-th word of `topic`. Topics use disjoint consonant onsets
    /// (up to 8 topics) so they share few character n-grams.
    pub fn word(&self, topic: usize, index: usize) -> String {
        let onsets = ONSETS[topic % ONSETS.len()];
        let mut word = String::new();
        let mut i = index;
        // Three syllables give 3*5 = 15 choices each, ample for small vocabularies.
        for _ in 0..3 {
            let syl = i % (onsets.len() * VOWELS.len());
            word.push_str(onsets[syl / VOWELS.len()]);
            word.push_str(VOWELS[syl % VOWELS.len()]);
            i /= onsets.len() * VOWELS.len();
        }
        if topic >= ONSETS.len() {
            word.push_str(&"x".repeat(topic / ONSETS.len()));
        }
        word
    }

    pub fn topic_words(&self, topic: usize) -> Vec<String> {
        (0..self.words_per_topic).map(|i| self.word(topic, i)).collect()
    }

    /// Topic of a normalized word, if it belongs to this corpus.
    pub fn topic_of(&self, word: &str) -> Option<usize> {
        (0..self.topics).find(|&t| self.topic_words(t).iter().any(|w| w == word))
    }

    fn tag(&self, index: usize) -> Upos {
        if index < self.propn_per_topic {
            Upos::Propn
        } else if index < self.propn_per_topic + self.adj_per_topic {
            Upos::Adj
        } else {
            Upos::Noun
        }
    }

    fn sentences_for(&self, topic: usize) -> usize {
        self.sentences_per_topic
            .get(topic)
            .or(self.sentences_per_topic.last())
            .copied()
            .unwrap_or(0)
    }

    /// Generate a slice named `synthetic-<seed>`.
    pub fn build(&self, seed: u64) -> CorpusSlice {
        self.build_named(format!("synthetic-{seed}"), seed)
    }

    pub fn build_named(&self, slice_id: impl Into<String>, seed: u64) -> CorpusSlice {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut plan: Vec<usize> = (0..self.topics)
            .flat_map(|t| std::iter::repeat_n(t, self.sentences_for(t)))
            .collect();
        plan.shuffle(&mut rng);

        let vocab: Vec<Vec<String>> = (0..self.topics).map(|t| self.topic_words(t)).collect();
        let sentences = plan
            .into_iter()
            .map(|topic| {
                (0..self.sentence_len)
                    .map(|_| {
                        let i = rng.gen_range(0..self.words_per_topic);
                        let upos = self.tag(i);
                        let mut surface = vocab[topic][i].clone();
                        if upos == Upos::Propn {
                            surface[..1].make_ascii_uppercase();
                        }
                        TaggedToken::new(surface, upos)
                    })
                    .collect()
            })
            .collect();
        CorpusSlice::new(slice_id, sentences)
    }
}
