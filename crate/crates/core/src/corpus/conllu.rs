//! Minimal CoNLL-U reader and writer.
//!
//! Only the FORM (column 2) and UPOS (column 4) fields are kept. Multiword
//! range lines (`1-2`) and empty nodes (`1.1`) carry no UPOS of their own and
//! are skipped, as are `#` comment lines.

use std::io::{self, BufRead, Write};

use super::token::{TaggedToken, Upos};
use crate::error::{Error, Result};

const COLUMNS: usize = 10;

/// Parse CoNLL-U lines into sentences.
///
/// Line numbers in errors are 1-based.
pub fn parse_conllu<I, S>(lines: I) -> Result<Vec<Vec<TaggedToken>>>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut sentences = Vec::new();
    let mut current = Vec::new();

    for (idx, line) in lines.into_iter().enumerate() {
        let line = line.as_ref().trim_end_matches(['\r', '\n']);
        let lineno = idx + 1;

        if line.trim().is_empty() {
            if !current.is_empty() {
                sentences.push(std::mem::take(&mut current));
            }
            continue;
        }
        if line.starts_with('#') {
            continue;
        }

        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != COLUMNS {
            return Err(Error::MalformedRecord {
                line: lineno,
                reason: format!("expected {COLUMNS} columns, found {}", fields.len()),
            });
        }

        let id = fields[0];
        if id.contains('-') || id.contains('.') {
            continue;
        }

        let upos = fields[3].parse::<Upos>().map_err(|e| Error::MalformedRecord {
            line: lineno,
            reason: format!("unknown UPOS tag {:?}", e.0),
        })?;
        current.push(TaggedToken::new(fields[1], upos));
    }

    if !current.is_empty() {
        sentences.push(current);
    }
    Ok(sentences)
}

/// Parse CoNLL-U from a buffered reader.
pub fn read_conllu<R: BufRead>(reader: R) -> Result<Vec<Vec<TaggedToken>>> {
    let lines = reader
        .lines()
        .collect::<io::Result<Vec<_>>>()
        .map_err(|e| Error::io("<conllu stream>", e))?;
    parse_conllu(lines)
}

/// Write sentences as CoNLL-U, filling unused columns with `_`.
///
/// Surface forms must not contain tabs or newlines.
pub fn write_conllu<W: Write>(sentences: &[Vec<TaggedToken>], mut out: W) -> io::Result<()> {
    for sentence in sentences {
        for (i, tok) in sentence.iter().enumerate() {
            writeln!(
                out,
                "{}\t{}\t_\t{}\t_\t_\t_\t_\t_\t_",
                i + 1,
                tok.surface,
                tok.upos
            )?;
        }
        writeln!(out)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TWO_TOKENS: &str = "# newdoc\n# sent_id = 1\n1\tLondon\tLondon\tPROPN\tNNP\t_\t2\tnsubj\t_\t_\n2\tlovely\tlovely\tADJ\tJJ\t_\t0\troot\t_\t_\n\n";

    #[test]
    fn parses_two_token_sentence() {
        let sentences = parse_conllu(TWO_TOKENS.lines()).unwrap();
        assert_eq!(sentences.len(), 1);
        let s = &sentences[0];
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].upos, Upos::Propn);
        assert_eq!(s[0].normalized.as_deref(), Some("london"));
        assert_eq!(s[1].upos, Upos::Adj);
    }

    #[test]
    fn comment_only_input_yields_nothing() {
        assert!(parse_conllu(["# newdoc"]).unwrap().is_empty());
    }

    #[test]
    fn wrong_column_count_reports_line() {
        let input = "1\tLondon\tLondon\tPROPN\tNNP\t_\t2\tnsubj\t_\t_\n2\tx\tPROPN\n";
        match parse_conllu(input.lines()) {
            Err(Error::MalformedRecord { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_upos_is_malformed() {
        let input = "1\tLondon\tLondon\tNNP\tNNP\t_\t2\tnsubj\t_\t_\n";
        assert!(matches!(
            parse_conllu(input.lines()),
            Err(Error::MalformedRecord { line: 1, .. })
        ));
    }

    #[test]
    fn skips_multiword_ranges_and_empty_nodes() {
        let input = "1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n1\tdo\tdo\tAUX\t_\t_\t0\troot\t_\t_\n2\tn't\tnot\tPART\t_\t_\t1\tadvmod\t_\t_\n2.1\tx\t_\t_\t_\t_\t_\t_\t_\t_\n";
        let sentences = parse_conllu(input.lines()).unwrap();
        assert_eq!(sentences[0].len(), 2);
    }

    #[test]
    fn trailing_sentence_without_blank_line() {
        let input = "1\ta\ta\tDET\t_\t_\t0\troot\t_\t_";
        assert_eq!(parse_conllu(input.lines()).unwrap().len(), 1);
    }

    fn token() -> impl Strategy<Value = TaggedToken> {
        ("[A-Za-z0-9'.,-]{1,10}", 0..Upos::ALL.len())
            .prop_map(|(s, t)| TaggedToken::new(s, Upos::ALL[t]))
    }

    proptest! {
        #[test]
        fn write_then_parse_is_identity(
            sentences in prop::collection::vec(prop::collection::vec(token(), 1..8), 0..6)
        ) {
            let mut buf = Vec::new();
            write_conllu(&sentences, &mut buf).unwrap();
            let parsed = read_conllu(buf.as_slice()).unwrap();
            prop_assert_eq!(parsed, sentences);
        }
    }
}
