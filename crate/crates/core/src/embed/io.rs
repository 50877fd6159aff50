//! word2vec-style text vectors: a `V d` header, then `word v1 ... vd` per line.

use std::io::{self, BufRead, Write};

use super::Embeddings;
use crate::error::{Error, Result};

const SIGNIFICANT_DIGITS: i32 = 6;

pub fn write_embeddings<W: Write>(embeddings: &Embeddings, mut out: W) -> io::Result<()> {
    writeln!(out, "{} {}", embeddings.len(), embeddings.dim())?;
    let mut line = String::new();
    for (i, word) in embeddings.words().iter().enumerate() {
        line.clear();
        line.push_str(word);
        for &v in embeddings.row(i) {
            line.push(' ');
            line.push_str(&format_significant(v as f64, SIGNIFICANT_DIGITS));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn read_embeddings<R: BufRead>(reader: R) -> Result<Embeddings> {
    let mut lines = reader.lines();
    let header = match lines.next() {
        Some(line) => line.map_err(|e| Error::io("<embedding stream>", e))?,
        None => return Err(Error::MalformedHeader(String::new())),
    };
    let (rows, dim) = parse_header(&header)?;

    let mut words = Vec::with_capacity(rows);
    let mut data = Vec::with_capacity(rows * dim);
    for (idx, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::io("<embedding stream>", e))?;
        let lineno = idx + 2;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split_ascii_whitespace();
        let word = fields.next().unwrap_or_default().to_owned();
        let values = fields
            .map(|f| {
                f.parse::<f32>().map_err(|_| Error::MalformedRecord {
                    line: lineno,
                    reason: format!("not a number: {f:?}"),
                })
            })
            .collect::<Result<Vec<f32>>>()?;
        if values.len() != dim {
            return Err(Error::DimensionMismatch {
                line: lineno,
                expected: dim,
                found: values.len(),
            });
        }
        words.push(word);
        data.extend(values);
    }
    if words.len() != rows {
        return Err(Error::MalformedHeader(format!("{header} (found {} rows)", words.len())));
    }
    Embeddings::new(words, dim, data)
}

fn parse_header(header: &str) -> Result<(usize, usize)> {
    let bad = || Error::MalformedHeader(header.to_owned());
    let mut parts = header.split_ascii_whitespace();
    let rows = parts.next().and_then(|p| p.parse().ok()).ok_or_else(bad)?;
    let dim: usize = parts.next().and_then(|p| p.parse().ok()).ok_or_else(bad)?;
    if parts.next().is_some() || dim == 0 {
        return Err(bad());
    }
    Ok((rows, dim))
}

/// Format like C's `%.{digits}g`.
fn format_significant(v: f64, digits: i32) -> String {
    if v == 0.0 {
        return "0".to_owned();
    }
    // Exponent after rounding to `digits` significant digits.
    let sci = format!("{:.*e}", (digits - 1) as usize, v);
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if exp < -4 || exp >= digits {
        let (mantissa, _) = sci.split_at(sci.find('e').unwrap());
        let mantissa = trim_zeros(mantissa);
        format!("{mantissa}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let decimals = (digits - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_owned()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn model() -> Embeddings {
        Embeddings::new(
            vec!["fox".into(), "dog".into()],
            3,
            vec![0.5, -1.25, 3.0, 1e-7, 123456.7, -0.000123],
        )
        .unwrap()
    }

    #[test]
    fn percent_g_formatting() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (0.5, "0.5"),
            (-1.25, "-1.25"),
            (123456.7, "123457"),
            (1234567.0, "1.23457e+06"),
            (1e-7, "1e-07"),
            (0.000123, "0.000123"),
            (0.1234567, "0.123457"),
            (9.9999996, "10"),
        ];
        for (v, want) in cases {
            assert_eq!(format_significant(v, 6), want, "{v}");
        }
    }

    #[test]
    fn two_word_file_layout() {
        let mut buf = Vec::new();
        write_embeddings(&model(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "2 3");
        assert_eq!(lines[1], "fox 0.5 -1.25 3");
    }

    #[test]
    fn extra_value_is_dimension_mismatch() {
        let text = "2 3\nfox 1 2 3\ndog 1 2 3 4\n";
        assert!(matches!(
            read_embeddings(text.as_bytes()),
            Err(Error::DimensionMismatch { line: 3, expected: 3, found: 4 })
        ));
    }

    #[test]
    fn bad_headers() {
        for text in ["", "2\n", "two 3\n", "2 3 4\n", "2 0\n"] {
            assert!(matches!(read_embeddings(text.as_bytes()), Err(Error::MalformedHeader(_))), "{text:?}");
        }
        assert!(matches!(
            read_embeddings("3 1\na 1\n".as_bytes()),
            Err(Error::MalformedHeader(_))
        ));
    }

    proptest! {
        #[test]
        fn round_trip_within_tolerance(values in prop::collection::vec(-10.0f32..10.0, 1..40)) {
            let dim = values.len();
            let m = Embeddings::new(vec!["w".into()], dim, values).unwrap();
            let mut buf = Vec::new();
            write_embeddings(&m, &mut buf).unwrap();
            let back = read_embeddings(buf.as_slice()).unwrap();
            prop_assert_eq!(back.words(), m.words());
            for (a, b) in m.as_slice().iter().zip(back.as_slice()) {
                prop_assert!((a - b).abs() <= 1e-5 * a.abs().max(1.0), "{} vs {}", a, b);
            }
        }
    }
}
