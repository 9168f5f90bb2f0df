//! Plain-text matrix and vector formats.
//!
//! Matrix files carry the dimension on the first data line followed by `n`
//! rows of `n` whitespace-separated values. CSV input (`n` rows of `n`
//! comma-separated values, no dimension line) is detected by a comma on the
//! first data line. Vector files hold a single line of values. In all
//! formats, blank lines and lines starting with `#` are ignored.

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_value(line: usize, token: &str) -> Result<f64> {
    let v: f64 = token
        .trim()
        .parse()
        .map_err(|_| parse_err(line, format!("invalid number `{token}`")))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("non-finite value `{token}`")));
    }
    Ok(v)
}

pub fn parse_matrix(text: &str) -> Result<SquareMatrix> {
    let lines: Vec<(usize, &str)> = data_lines(text).collect();
    let Some(&(first_no, first)) = lines.first() else {
        return Err(parse_err(text.lines().count().max(1), "no matrix data"));
    };
    if first.contains(',') {
        parse_csv(&lines)
    } else {
        let n: usize = first
            .parse()
            .map_err(|_| parse_err(first_no, format!("expected dimension, found `{first}`")))?;
        if n == 0 {
            return Err(parse_err(first_no, "dimension must be at least 1"));
        }
        parse_rows(&lines[1..], n, first_no, |l| {
            l.split_whitespace().collect::<Vec<_>>()
        })
    }
}

fn parse_csv(lines: &[(usize, &str)]) -> Result<SquareMatrix> {
    parse_rows(lines, lines.len(), 0, |l| l.split(',').collect::<Vec<_>>())
}

fn parse_rows<'a>(
    lines: &[(usize, &'a str)],
    n: usize,
    header_line: usize,
    split: impl Fn(&'a str) -> Vec<&'a str>,
) -> Result<SquareMatrix> {
    if lines.len() < n {
        let line = lines.last().map_or(header_line, |&(no, _)| no);
        return Err(parse_err(
            line,
            format!("expected {n} rows, found {}", lines.len()),
        ));
    }
    if let Some(&(extra, _)) = lines.get(n) {
        return Err(parse_err(extra, format!("unexpected data after {n} rows")));
    }
    let mut entries = Vec::with_capacity(n * n);
    for &(no, line) in lines {
        let tokens = split(line);
        if tokens.len() != n {
            return Err(parse_err(
                no,
                format!("expected {n} values, found {}", tokens.len()),
            ));
        }
        for t in tokens {
            entries.push(parse_value(no, t)?);
        }
    }
    SquareMatrix::new(n, entries)
}

pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    let mut lines = data_lines(text);
    let Some((no, line)) = lines.next() else {
        return Err(parse_err(text.lines().count().max(1), "no vector data"));
    };
    if let Some((extra, _)) = lines.next() {
        return Err(parse_err(extra, "vector must be on a single line"));
    }
    line.split_whitespace()
        .map(|t| parse_value(no, t))
        .collect()
}

/// Writes the whitespace format with shortest round-trip decimals.
pub fn write_matrix(m: &SquareMatrix) -> String {
    let mut out = format!("{}\n", m.n());
    for row in m.rows() {
        out.push_str(&join(row));
        out.push('\n');
    }
    out
}

pub fn write_vector(v: &[f64]) -> String {
    format!("{}\n", join(v))
}

fn join(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(" ")
}
