//! Character n-gram extraction and bucket hashing for subword vectors.

const BOW: char = '<';
const EOW: char = '>';

/// 32-bit FNV-1a, feeding each byte sign-extended as fastText does.
pub fn fasttext_hash(s: &str) -> u32 {
    let mut h: u32 = 2_166_136_261;
    for &b in s.as_bytes() {
        h ^= b as i8 as i32 as u32;
        h = h.wrapping_mul(16_777_619);
    }
    h
}

/// All n-grams of `<word>` with `nmin <= n <= nmax`, as strings, in
/// order of start position then length.
pub fn char_ngram_strings(word: &str, nmin: usize, nmax: usize) -> Vec<String> {
    let chars: Vec<char> = std::iter::once(BOW)
        .chain(word.chars())
        .chain(std::iter::once(EOW))
        .collect();
    let mut grams = Vec::new();
    for start in 0..chars.len() {
        for n in nmin.max(1)..=nmax {
            let end = start + n;
            if end > chars.len() {
                break;
            }
            grams.push(chars[start..end].iter().collect());
        }
    }
    grams
}

/// Bucket ids in `[0, buckets)` for every n-gram of `word`.
pub fn char_ngrams(word: &str, nmin: usize, nmax: usize, buckets: usize) -> Vec<u32> {
    assert!(buckets >= 1, "buckets must be positive");
    char_ngram_strings(word, nmin, nmax)
        .iter()
        .map(|g| (fasttext_hash(g) as u64 % buckets as u64) as u32)
        .collect()
}
