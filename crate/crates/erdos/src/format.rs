//! Plain-text formats: `p/q` rationals, matrix grids and 0/1 skeletons.

use std::fmt::Write as _;

use erdos_core::{RatMatrix, Rational, Skeleton};
use num_bigint::BigInt;
use num_traits::Zero;

use crate::{Error, Result};

/// Parses `p`, `p/q` or `-p/q` into lowest terms.
pub fn parse_rational(token: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("invalid rational {token:?}"));
    let (num, den) = match token.split_once('/') {
        Some((p, q)) => (p, q),
        None => (token, "1"),
    };
    let num: BigInt = num.trim().parse().map_err(|_| bad())?;
    let den: BigInt = den.trim().parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {token:?}")));
    }
    Ok(Rational::new(num, den))
}

/// `p/q`, or `p` when `q = 1`.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// One row per line, whitespace-separated rationals. Blank lines and lines
/// starting with `#` are skipped.
pub fn parse_matrix(text: &str) -> Result<RatMatrix> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse("matrix has no rows".into()));
    }
    let width = rows[0].len();
    if let Some(i) = rows.iter().position(|r| r.len() != width) {
        return Err(Error::Parse(format!("row {} has {} entries, expected {width}", i + 1, rows[i].len())));
    }
    Ok(RatMatrix::from_rows(rows)?)
}

/// Inverse of [`parse_matrix`]; columns are padded to equal width.
pub fn format_matrix(m: &RatMatrix) -> String {
    let cells: Vec<String> = m.entries().iter().map(format_rational).collect();
    let width = cells.iter().map(String::len).max().unwrap_or(0);
    let mut out = String::new();
    for row in cells.chunks(m.cols().max(1)) {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

/// Same grid with entries rendered as decimals; display only.
pub fn format_matrix_approx(m: &RatMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let line: Vec<String> = m.row(i).iter().map(|r| format!("{:.6}", approx(r))).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

pub fn approx(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn parse_skeleton(text: &str) -> Result<Skeleton> {
    text.parse::<Skeleton>().map_err(|e| Error::Parse(format!("invalid skeleton: {e}")))
}

/// `{a,b,c}`.
pub fn format_set(values: &[Rational]) -> String {
    let parts: Vec<String> = values.iter().map(format_rational).collect();
    format!("{{{}}}", parts.join(","))
}

/// `(a,b,c)`.
pub fn format_vector(values: &[Rational]) -> String {
    let parts: Vec<String> = values.iter().map(format_rational).collect();
    format!("({})", parts.join(","))
}
