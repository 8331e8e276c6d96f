//! Plain-text matrix format.
//!
//! ```text
//! # comment
//! 2 2
//! 1 (0.5,-1)
//! 0 2.5e-3
//! ```
//!
//! The first non-comment line holds `rows cols`; entries follow row-major as
//! `re` or `(re,im)`, separated by whitespace and free to span lines.

use posfact_core::{CMatrix, C64};
use std::fmt::Write as _;

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    At { line: usize, msg: String },
    #[error("missing `rows cols` header")]
    MissingHeader,
    #[error("expected {expected} entries, found {found}")]
    Count { expected: usize, found: usize },
}

fn at(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::At {
        line,
        msg: msg.into(),
    }
}

/// Splits a line into tokens, keeping `( re , im )` together.
fn tokens(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0usize;
    for ch in line.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                cur.push(ch);
            }
            c if c.is_whitespace() => {
                if depth == 0 && !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn real(tok: &str, line: usize) -> Result<f64, ParseError> {
    let v: f64 = tok
        .parse()
        .map_err(|_| at(line, format!("cannot parse number `{tok}`")))?;
    if !v.is_finite() {
        return Err(at(line, format!("non-finite entry `{tok}`")));
    }
    Ok(v)
}

fn entry(tok: &str, line: usize) -> Result<C64, ParseError> {
    match tok.strip_prefix('(') {
        Some(rest) => {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| at(line, format!("unbalanced parenthesis in `{tok}`")))?;
            let (re, im) = inner
                .split_once(',')
                .ok_or_else(|| at(line, format!("complex entry `{tok}` needs `(re,im)`")))?;
            Ok(C64::new(real(re, line)?, real(im, line)?))
        }
        None => Ok(C64::new(real(tok, line)?, 0.0)),
    }
}

pub fn parse_matrix(text: &str) -> Result<CMatrix, ParseError> {
    let mut shape = None;
    let mut values = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        if toks.is_empty() {
            continue;
        }
        match shape {
            None => {
                if toks.len() != 2 {
                    return Err(at(line, "header must be `rows cols`"));
                }
                let dim = |t: &str| {
                    t.parse::<usize>()
                        .map_err(|_| at(line, format!("bad dimension `{t}`")))
                };
                shape = Some((dim(&toks[0])?, dim(&toks[1])?));
            }
            Some(_) => {
                for t in &toks {
                    values.push(entry(t, line)?);
                }
            }
        }
    }
    let (rows, cols) = shape.ok_or(ParseError::MissingHeader)?;
    if values.len() != rows * cols {
        return Err(ParseError::Count {
            expected: rows * cols,
            found: values.len(),
        });
    }
    Ok(CMatrix::from_row_slice(rows, cols, &values))
}

/// 17 significant digits, enough to re-read every `f64` exactly.
fn number(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn format_entry(z: C64) -> String {
    if z.im.to_bits() == 0 {
        number(z.re)
    } else {
        format!("({},{})", number(z.re), number(z.im))
    }
}

pub fn write_matrix(m: &CMatrix, comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(c) = comment {
        for l in c.lines() {
            let _ = writeln!(out, "# {l}");
        }
    }
    let _ = writeln!(out, "{} {}", m.nrows(), m.ncols());
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|c| format_entry(m[(r, c)])).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}
