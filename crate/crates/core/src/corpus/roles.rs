use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::{self, BufRead, Write};

use super::{CorpusSlice, Upos, Vocabulary};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    /// Proper nouns.
    Neutral,
    /// Adjectives.
    Attribute,
}

impl Role {
    pub fn code(self) -> char {
        match self {
            Role::Neutral => 'N',
            Role::Attribute => 'A',
        }
    }

    fn from_code(code: &str) -> Option<Option<Role>> {
        match code {
            "N" => Some(Some(Role::Neutral)),
            "A" => Some(Some(Role::Attribute)),
            "-" => Some(None),
            _ => None,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

/// Neutral and attribute words of one slice. The two sets are disjoint.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WordRoleSet {
    neutral: BTreeSet<String>,
    attribute: BTreeSet<String>,
}

impl WordRoleSet {
    pub fn neutral(&self) -> &BTreeSet<String> {
        &self.neutral
    }

    pub fn attribute(&self) -> &BTreeSet<String> {
        &self.attribute
    }

    pub fn role(&self, word: &str) -> Option<Role> {
        if self.neutral.contains(word) {
            Some(Role::Neutral)
        } else if self.attribute.contains(word) {
            Some(Role::Attribute)
        } else {
            None
        }
    }

    /// Insert `word` with `role`, removing it from the other set.
    pub fn insert(&mut self, word: impl Into<String>, role: Role) {
        let word = word.into();
        match role {
            Role::Neutral => {
                self.attribute.remove(&word);
                self.neutral.insert(word);
            }
            Role::Attribute => {
                self.neutral.remove(&word);
                self.attribute.insert(word);
            }
        }
    }

    pub fn len(&self) -> usize {
        self.neutral.len() + self.attribute.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Role words in vocabulary order (most frequent first), at most `cap` of them.
    pub fn ranked_words(&self, vocab: &Vocabulary, cap: usize) -> Vec<(String, Role)> {
        vocab
            .iter()
            .filter_map(|(_, w, _)| self.role(w).map(|r| (w.to_owned(), r)))
            .take(cap)
            .collect()
    }
}

/// Assign each in-vocabulary word the majority UPOS over its occurrences.
///
/// Majority PROPN gives a neutral word and majority ADJ an attribute word. A word
/// whose top two tags tie is dropped.
pub fn select_role_words(slice: &CorpusSlice, vocab: &Vocabulary) -> Result<WordRoleSet> {
    let mut tallies: HashMap<usize, [u32; Upos::ALL.len()]> = HashMap::new();
    for sentence in &slice.sentences {
        for tok in sentence {
            let Some(id) = tok.normalized.as_deref().and_then(|w| vocab.id(w)) else {
                continue;
            };
            tallies.entry(id).or_insert([0; Upos::ALL.len()])[tok.upos as usize] += 1;
        }
    }

    let mut roles = WordRoleSet::default();
    for (id, tally) in tallies {
        let Some(tag) = majority(&tally) else {
            continue;
        };
        match tag {
            Upos::Propn => roles.insert(vocab.word(id), Role::Neutral),
            Upos::Adj => roles.insert(vocab.word(id), Role::Attribute),
            _ => {}
        }
    }

    let missing = if roles.neutral.is_empty() {
        Some("neutral (PROPN)")
    } else if roles.attribute.is_empty() {
        Some("attribute (ADJ)")
    } else {
        None
    };
    match missing {
        Some(missing) => Err(Error::EmptyRoleSet {
            slice: slice.slice_id.clone(),
            missing,
        }),
        None => Ok(roles),
    }
}

fn majority(tally: &[u32; Upos::ALL.len()]) -> Option<Upos> {
    let best = *tally.iter().max()?;
    if best == 0 {
        return None;
    }
    let mut winners = tally.iter().enumerate().filter(|(_, &c)| c == best);
    let (idx, _) = winners.next()?;
    if winners.next().is_some() {
        None
    } else {
        Some(Upos::ALL[idx])
    }
}

/// Write `word<TAB>id<TAB>frequency<TAB>role`, one line per vocabulary entry.
pub fn write_vocabulary<W: Write>(vocab: &Vocabulary, roles: &WordRoleSet, mut out: W) -> io::Result<()> {
    for (id, word, count) in vocab.iter() {
        let role = roles.role(word).map_or('-', Role::code);
        writeln!(out, "{word}\t{id}\t{count}\t{role}")?;
    }
    Ok(())
}

/// Read a file written by [`write_vocabulary`].
///
/// The file's ids must match the deterministic order rebuilt from the counts.
pub fn read_vocabulary<R: BufRead>(reader: R, min_count: usize) -> Result<(Vocabulary, WordRoleSet)> {
    let mut counts = Vec::new();
    let mut ids = Vec::new();
    let mut roles = WordRoleSet::default();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<vocabulary stream>", e))?;
        let lineno = idx + 1;
        if line.is_empty() {
            continue;
        }
        let malformed = |reason: &str| Error::MalformedRecord {
            line: lineno,
            reason: reason.to_owned(),
        };
        let fields: Vec<&str> = line.split('\t').collect();
        let [word, id, freq, role] = fields[..] else {
            return Err(malformed("expected 4 tab-separated fields"));
        };
        let id: usize = id.parse().map_err(|_| malformed("bad id"))?;
        let freq: u64 = freq.parse().map_err(|_| malformed("bad frequency"))?;
        let role = Role::from_code(role).ok_or_else(|| malformed("role must be N, A or -"))?;
        if let Some(role) = role {
            roles.insert(word, role);
        }
        counts.push((word.to_owned(), freq));
        ids.push((word.to_owned(), id));
    }
    let vocab = Vocabulary::from_counts(counts, min_count)?;
    for (word, id) in ids {
        if vocab.id(&word) != Some(id) {
            return Err(Error::VocabMismatch(format!("id of {word:?} is not canonical")));
        }
    }
    Ok((vocab, roles))
}

/// Write ranked role words as `word<TAB>role`, most frequent first.
pub fn write_role_words<W: Write>(words: &[(String, Role)], mut out: W) -> io::Result<()> {
    for (word, role) in words {
        writeln!(out, "{word}\t{}", role.code())?;
    }
    Ok(())
}

/// Read a file written by [`write_role_words`].
pub fn read_role_words<R: BufRead>(reader: R) -> Result<Vec<(String, Role)>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<role stream>", e))?;
        if line.is_empty() {
            continue;
        }
        let role = match line.split_once('\t') {
            Some((word, code)) if !word.is_empty() => Role::from_code(code).flatten().map(|r| (word.to_owned(), r)),
            _ => None,
        };
        out.push(role.ok_or_else(|| Error::MalformedRecord {
            line: idx + 1,
            reason: "expected `word<TAB>N` or `word<TAB>A`".into(),
        })?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_vocabulary, TaggedToken};
    use proptest::prelude::*;

    fn slice(tokens: &[(&str, Upos)]) -> CorpusSlice {
        let sentence = tokens.iter().map(|(w, t)| TaggedToken::new(*w, *t)).collect();
        CorpusSlice::new("1810s", vec![sentence])
    }

    #[test]
    fn majority_rule_examples() {
        let mut toks = vec![("London", Upos::Propn); 5];
        toks.extend([("happy", Upos::Adj); 2]);
        toks.extend([
            ("fair", Upos::Adj),
            ("fair", Upos::Adj),
            ("Fair", Upos::Propn),
            ("fair", Upos::Adj),
            ("tie", Upos::Adj),
            ("tie", Upos::Propn),
            ("run", Upos::Verb),
        ]);
        let s = slice(&toks);
        let vocab = build_vocabulary(&s, 1).unwrap();
        let roles = select_role_words(&s, &vocab).unwrap();
        assert_eq!(roles.role("london"), Some(Role::Neutral));
        assert_eq!(roles.role("happy"), Some(Role::Attribute));
        assert_eq!(roles.role("fair"), Some(Role::Attribute));
        assert_eq!(roles.role("tie"), None);
        assert_eq!(roles.role("run"), None);
    }

    #[test]
    fn missing_role_is_an_error() {
        let s = slice(&[("London", Upos::Propn), ("walks", Upos::Verb)]);
        let vocab = build_vocabulary(&s, 1).unwrap();
        assert!(matches!(
            select_role_words(&s, &vocab),
            Err(Error::EmptyRoleSet { .. })
        ));
    }

    #[test]
    fn below_min_count_words_are_not_roles() {
        let s = slice(&[
            ("London", Upos::Propn),
            ("London", Upos::Propn),
            ("happy", Upos::Adj),
            ("happy", Upos::Adj),
            ("Paris", Upos::Propn),
        ]);
        let vocab = build_vocabulary(&s, 2).unwrap();
        let roles = select_role_words(&s, &vocab).unwrap();
        assert_eq!(roles.role("paris"), None);
    }

    #[test]
    fn vocabulary_file_round_trip() {
        let s = slice(&[
            ("London", Upos::Propn),
            ("happy", Upos::Adj),
            ("happy", Upos::Adj),
            ("the", Upos::Det),
        ]);
        let vocab = build_vocabulary(&s, 1).unwrap();
        let roles = select_role_words(&s, &vocab).unwrap();
        let mut buf = Vec::new();
        write_vocabulary(&vocab, &roles, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "happy\t0\t2\tA\nlondon\t1\t1\tN\nthe\t2\t1\t-\n"
        );
        let (v2, r2) = read_vocabulary(buf.as_slice(), 1).unwrap();
        assert_eq!(v2, vocab);
        assert_eq!(r2, roles);
    }

    #[test]
    fn ranked_words_follow_frequency_and_cap() {
        let s = slice(&[
            ("London", Upos::Propn),
            ("happy", Upos::Adj),
            ("happy", Upos::Adj),
            ("Paris", Upos::Propn),
            ("Paris", Upos::Propn),
            ("Paris", Upos::Propn),
        ]);
        let vocab = build_vocabulary(&s, 1).unwrap();
        let roles = select_role_words(&s, &vocab).unwrap();
        let ranked = roles.ranked_words(&vocab, 2);
        assert_eq!(
            ranked,
            vec![("paris".to_owned(), Role::Neutral), ("happy".to_owned(), Role::Attribute)]
        );
    }

    proptest! {
        #[test]
        fn role_sets_are_disjoint(tags in prop::collection::vec((0usize..6, 0usize..Upos::ALL.len()), 1..200)) {
            let words = ["alpha", "beta", "gamma", "delta", "eps", "zeta"];
            let toks: Vec<(&str, Upos)> = tags.iter().map(|&(w, t)| (words[w], Upos::ALL[t])).collect();
            let s = slice(&toks);
            let vocab = build_vocabulary(&s, 1).unwrap();
            if let Ok(roles) = select_role_words(&s, &vocab) {
                prop_assert!(roles.neutral().is_disjoint(roles.attribute()));
                for w in roles.neutral().iter().chain(roles.attribute()) {
                    prop_assert!(vocab.id(w).is_some());
                }
            }
        }
    }

    #[test]
    fn role_word_file_round_trip() {
        let words = vec![("london".to_string(), Role::Neutral), ("happy".to_string(), Role::Attribute)];
        let mut buf = Vec::new();
        write_role_words(&words, &mut buf).unwrap();
        assert_eq!(buf, b"london\tN\nhappy\tA\n");
        assert_eq!(read_role_words(buf.as_slice()).unwrap(), words);
        assert!(matches!(
            read_role_words("london\t-\n".as_bytes()),
            Err(Error::MalformedRecord { line: 1, .. })
        ));
    }
}
