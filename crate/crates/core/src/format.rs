//! The text design format.
//!
//! ```text
//! RYSERLAB v=7 b=7
//! 0110100
//! ...
//! ```
//!
//! Row `i`, column `j` is `1` iff point `j` lies in block `i`. Blank lines and
//! lines starting with `#` are skipped when reading; the writer emits neither.

use std::fmt::Write as _;

use thiserror::Error;

use crate::design::{DesignError, IncidenceStructure};
use crate::pointset::{PointSet, MAX_POINTS};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}: {source}")]
    Structure {
        line: usize,
        #[source]
        source: DesignError,
    },
    #[error("no header line found")]
    MissingHeader,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, column, message: message.into() }
}

fn parse_field(line: usize, col: usize, tok: &str, key: &str) -> Result<usize, FormatError> {
    let value = tok
        .strip_prefix(key)
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| syntax(line, col, format!("expected `{key}=<int>`, found `{tok}`")))?;
    value
        .parse::<usize>()
        .map_err(|_| syntax(line, col + key.len() + 1, format!("`{value}` is not a nonnegative integer")))
}

/// Parses one design from `text`.
pub fn parse_design(text: &str) -> Result<IncidenceStructure, FormatError> {
    let mut header: Option<(usize, usize, usize)> = None; // (v, b, line)
    let mut rows: Vec<PointSet> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim_end_matches('\r');
        if content.trim().is_empty() || content.starts_with('#') {
            continue;
        }
        last_line = line;
        match header {
            None => {
                let mut toks = content.split(' ');
                if toks.next() != Some("RYSERLAB") {
                    return Err(syntax(line, 1, "expected header `RYSERLAB v=<int> b=<int>`"));
                }
                let v_tok = toks.next().ok_or_else(|| syntax(line, 10, "missing `v=<int>`"))?;
                let v = parse_field(line, 10, v_tok, "v")?;
                let b_col = 11 + v_tok.len();
                let b_tok = toks.next().ok_or_else(|| syntax(line, b_col, "missing `b=<int>`"))?;
                let b = parse_field(line, b_col, b_tok, "b")?;
                if let Some(extra) = toks.next() {
                    return Err(syntax(
                        line,
                        b_col + b_tok.len() + 1,
                        format!("unexpected trailing `{extra}`"),
                    ));
                }
                if !(2..=MAX_POINTS).contains(&v) {
                    return Err(FormatError::Structure { line, source: DesignError::PointCount(v) });
                }
                header = Some((v, b, line));
            }
            Some((v, b, _)) => {
                if rows.len() == b {
                    return Err(syntax(line, 1, format!("more than b={b} rows")));
                }
                let mut set = PointSet::EMPTY;
                let mut width = 0;
                for (j, ch) in content.chars().enumerate() {
                    match ch {
                        '0' => {}
                        '1' if j < v => set.insert(j),
                        '1' => {}
                        other => {
                            return Err(syntax(line, j + 1, format!("unexpected character `{other}`")))
                        }
                    }
                    width = j + 1;
                }
                if width != v {
                    return Err(syntax(
                        line,
                        width.min(v) + 1,
                        format!("row has {width} characters, expected {v}"),
                    ));
                }
                rows.push(set);
            }
        }
    }

    let (v, b, header_line) = header.ok_or(FormatError::MissingHeader)?;
    if rows.len() != b {
        return Err(syntax(last_line + 1, 1, format!("expected {b} rows, found {}", rows.len())));
    }
    IncidenceStructure::from_sets(v, rows).map_err(|source| {
        let line = match source {
            DesignError::EmptyBlock(i) | DesignError::FullBlock(i) => {
                row_line(text, header_line, i)
            }
            _ => header_line,
        };
        FormatError::Structure { line, source }
    })
}

/// Source line number of data row `row` (0-based).
fn row_line(text: &str, header_line: usize, row: usize) -> usize {
    text.lines()
        .enumerate()
        .skip(header_line)
        .filter(|(_, l)| {
            let l = l.trim_end_matches('\r');
            !(l.trim().is_empty() || l.starts_with('#'))
        })
        .nth(row)
        .map(|(i, _)| i + 1)
        .unwrap_or(header_line)
}

/// Serializes `s`: header then one row per block in stored order.
pub fn write_design(s: &IncidenceStructure) -> String {
    let v = s.v();
    let mut out = String::with_capacity((v + 1) * (v + 1) + 32);
    writeln!(out, "RYSERLAB v={} b={}", v, s.blocks().len()).unwrap();
    for b in s.blocks() {
        for p in 0..v {
            out.push(if b.contains(p) { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const PENCIL: &str = "RYSERLAB v=4 b=4\n0111\n1100\n1010\n1001\n";

    #[test]
    fn parses_and_writes_bit_exact() {
        let s = parse_design(PENCIL).unwrap();
        assert_eq!(s, crate::design::near_pencil(4));
        assert_eq!(write_design(&s), PENCIL);
    }

    #[test]
    fn skips_comments_and_blank_lines() {
        let text = "# near pencil\n\nRYSERLAB v=4 b=4\n0111\n# middle\n1100\n\n1010\n1001\n";
        assert_eq!(parse_design(text).unwrap(), crate::design::near_pencil(4));
    }

    #[test]
    fn reports_position_of_bad_character() {
        let err = parse_design("RYSERLAB v=4 b=4\n0111\n1120\n1010\n1001\n").unwrap_err();
        match err {
            FormatError::Syntax { line, column, .. } => assert_eq!((line, column), (3, 3)),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn reports_short_rows_and_bad_headers() {
        match parse_design("RYSERLAB v=4 b=4\n011\n").unwrap_err() {
            FormatError::Syntax { line, column, .. } => assert_eq!((line, column), (2, 4)),
            other => panic!("{other}"),
        }
        assert!(matches!(
            parse_design("RYSER v=4 b=4\n").unwrap_err(),
            FormatError::Syntax { line: 1, column: 1, .. }
        ));
        assert!(matches!(
            parse_design("RYSERLAB v=x b=4\n").unwrap_err(),
            FormatError::Syntax { line: 1, column: 12, .. }
        ));
        assert!(matches!(parse_design("# nothing\n").unwrap_err(), FormatError::MissingHeader));
    }

    #[test]
    fn block_count_mismatch_is_a_structure_error() {
        let err = parse_design("RYSERLAB v=3 b=2\n110\n011\n").unwrap_err();
        assert!(matches!(
            err,
            FormatError::Structure { source: DesignError::BlockCount { expected: 3, found: 2 }, .. }
        ));
    }

    #[test]
    fn empty_row_points_at_its_line() {
        let err = parse_design("RYSERLAB v=2 b=2\n10\n\n00\n").unwrap_err();
        assert!(matches!(err, FormatError::Structure { line: 4, source: DesignError::EmptyBlock(1) }));
    }
}
