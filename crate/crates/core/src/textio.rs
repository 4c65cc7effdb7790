//! The family text format.
//!
//! ```text
//! # optional comments
//! n 3
//! 1,3
//! 2
//! {}
//! ```
//!
//! The first non-comment line is `n <int>`; every further non-comment line
//! is one subset as comma-separated strictly ascending element labels, with
//! `{}` for the empty set. Serialization is canonical: subsets sorted by
//! (size, mask). A sequence file holds several families under one header,
//! separated by `--` lines.

use crate::error::{Error, Result};
use crate::family::{FamilySequence, GroundSet, SetFamily, Subset};

/// A non-fatal parse observation (currently only duplicate subsets, which
/// are deduplicated).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWarning {
    pub line: usize,
    pub message: String,
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Lines that carry content: neither blank nor `#` comments.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_header(line_no: usize, line: &str) -> Result<GroundSet> {
    let rest = line
        .strip_prefix('n')
        .ok_or_else(|| parse_error(line_no, format!("expected `n <int>`, found `{line}`")))?;
    let n: u32 = rest
        .trim()
        .parse()
        .map_err(|_| parse_error(line_no, format!("invalid ground set size `{}`", rest.trim())))?;
    GroundSet::new(n)
}

fn parse_subset_line(line_no: usize, line: &str, ground: GroundSet) -> Result<Subset> {
    if line == "{}" {
        return Ok(Subset::EMPTY);
    }
    let mut elements = Vec::new();
    for piece in line.split(',') {
        let e: u32 = piece
            .trim()
            .parse()
            .map_err(|_| parse_error(line_no, format!("invalid element `{}`", piece.trim())))?;
        if !ground.contains_element(e) {
            return Err(parse_error(
                line_no,
                format!("element {e} out of range for n = {}", ground.n()),
            ));
        }
        if let Some(&last) = elements.last() {
            if e <= last {
                return Err(parse_error(
                    line_no,
                    format!("elements must be strictly ascending, found {last} before {e}"),
                ));
            }
        }
        elements.push(e);
    }
    Subset::from_elements(&elements, ground)
}

/// Parses one family. Duplicate subsets produce warnings and are kept once.
pub fn parse_family(text: &str) -> Result<(SetFamily, Vec<ParseWarning>)> {
    let mut lines = content_lines(text);
    let (line_no, header) = lines
        .next()
        .ok_or_else(|| parse_error(0, "empty input; expected `n <int>`"))?;
    let ground = parse_header(line_no, header)?;
    let mut family = SetFamily::new_empty(ground);
    let mut warnings = Vec::new();
    for (line_no, line) in lines {
        if line == "--" {
            return Err(parse_error(
                line_no,
                "unexpected `--` separator in a single-family file",
            ));
        }
        let s = parse_subset_line(line_no, line, ground)?;
        if !family.insert(s) {
            warnings.push(ParseWarning {
                line: line_no,
                message: format!("duplicate subset {s}; kept once"),
            });
        }
    }
    Ok((family, warnings))
}

/// Canonical single-family serialization.
pub fn serialize_family(family: &SetFamily) -> String {
    let mut out = format!("n {}\n", family.ground().n());
    let mut members: Vec<Subset> = family.members().collect();
    members.sort_by_key(|s| (s.len(), s.mask()));
    for m in members {
        out.push_str(&m.to_string());
        out.push('\n');
    }
    out
}

/// Parses a sequence file: one `n` header, families separated by `--`
/// lines. A trailing `--` opens one final (possibly empty) family.
pub fn parse_sequence(text: &str) -> Result<(FamilySequence, Vec<ParseWarning>)> {
    let mut lines = content_lines(text);
    let (line_no, header) = lines
        .next()
        .ok_or_else(|| parse_error(0, "empty input; expected `n <int>`"))?;
    let ground = parse_header(line_no, header)?;
    let mut families = vec![SetFamily::new_empty(ground)];
    let mut warnings = Vec::new();
    for (line_no, line) in lines {
        if line == "--" {
            families.push(SetFamily::new_empty(ground));
            continue;
        }
        let s = parse_subset_line(line_no, line, ground)?;
        let current = families.last_mut().expect("at least one family is open");
        if !current.insert(s) {
            warnings.push(ParseWarning {
                line: line_no,
                message: format!("duplicate subset {s}; kept once"),
            });
        }
    }
    Ok((FamilySequence::new(families)?, warnings))
}

pub fn serialize_sequence(seq: &FamilySequence) -> String {
    let mut out = format!("n {}\n", seq.ground().n());
    for (i, family) in seq.families().iter().enumerate() {
        if i > 0 {
            out.push_str("--\n");
        }
        let mut members: Vec<Subset> = family.members().collect();
        members.sort_by_key(|s| (s.len(), s.mask()));
        for m in members {
            out.push_str(&m.to_string());
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let (f, w) = parse_family("n 2\n1\n1,2\n").unwrap();
        assert!(w.is_empty());
        assert_eq!(f.size(), 2);
        assert!(f.contains(Subset::from_elements(&[1], f.ground()).unwrap()));
        assert!(f.contains(Subset::from_elements(&[1, 2], f.ground()).unwrap()));

        let (f, _) = parse_family("n 2\n{}\n").unwrap();
        assert_eq!(f.size(), 1);
        assert!(f.contains(Subset::EMPTY));

        let (f, _) = parse_family("# header comment\nn 3\n\n2,3\n").unwrap();
        assert_eq!(f.size(), 1);
    }

    #[test]
    fn serialization_is_canonical() {
        let (f, _) = parse_family("n 3\n1,2,3\n2\n1,3\n").unwrap();
        assert_eq!(serialize_family(&f), "n 3\n2\n1,3\n1,2,3\n");
        let (again, w) = parse_family(&serialize_family(&f)).unwrap();
        assert_eq!(again, f);
        assert!(w.is_empty());
    }

    #[test]
    fn duplicate_subsets_warn_and_dedup() {
        let (f, w) = parse_family("n 2\n1\n1\n").unwrap();
        assert_eq!(f.size(), 1);
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].line, 3);
    }

    #[test]
    fn malformed_inputs_error() {
        assert!(parse_family("").is_err());
        assert!(parse_family("m 2\n").is_err());
        assert!(parse_family("n x\n").is_err());
        assert!(parse_family("n 0\n").is_err());
        assert!(parse_family("n 2\n3\n").is_err());
        assert!(parse_family("n 2\n1,Q\n").is_err());
        assert!(parse_family("n 3\n2,1\n").is_err());
        assert!(parse_family("n 2\n1\n--\n2\n").is_err());
    }

    #[test]
    fn sequence_round_trip() {
        let text = "n 2\n1\n--\n2\n1,2\n--\n";
        let (seq, w) = parse_sequence(text).unwrap();
        assert!(w.is_empty());
        assert_eq!(seq.s(), 3);
        assert_eq!(seq.family(0).size(), 1);
        assert_eq!(seq.family(1).size(), 2);
        assert_eq!(seq.family(2).size(), 0);
        let (again, _) = parse_sequence(&serialize_sequence(&seq)).unwrap();
        assert_eq!(again, seq);
        // A single block is not a sequence.
        assert!(parse_sequence("n 2\n1\n").is_err());
    }
}
