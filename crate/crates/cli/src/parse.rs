//! Literal parsers for sets, vectors, groups and channels. Errors name the
//! 1-based column of the offending token.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use polarsum::sumsets::Ambient;

use crate::error::{CliError, CliResult};

/// Splits a comma-separated literal into trimmed tokens with their columns.
/// Surrounding braces or brackets are accepted and skipped.
fn tokens(s: &str) -> CliResult<Vec<(usize, &str)>> {
    let trimmed_start = s.len() - s.trim_start().len();
    let mut body = s.trim();
    let mut offset = trimmed_start;
    if let Some(open) = body.chars().next().filter(|c| *c == '{' || *c == '[') {
        let close = if open == '{' { '}' } else { ']' };
        if !body.ends_with(close) {
            return Err(CliError::usage(format!(
                "malformed literal `{s}`: `{open}` at column {} is never closed",
                offset + 1
            )));
        }
        body = &body[1..body.len() - 1];
        offset += 1;
    }
    if body.trim().is_empty() {
        return Err(CliError::usage(format!("empty literal `{s}`")));
    }
    let mut out = Vec::new();
    let mut start = 0;
    for piece in body.split(',') {
        let lead = piece.len() - piece.trim_start().len();
        let col = offset + start + lead + 1;
        let tok = piece.trim();
        if tok.is_empty() {
            return Err(CliError::usage(format!(
                "malformed literal `{s}`: empty entry at column {col}"
            )));
        }
        out.push((col, tok));
        start += piece.len() + 1;
    }
    Ok(out)
}

fn fault(s: &str, col: usize, tok: &str, what: &str) -> CliError {
    CliError::usage(format!(
        "malformed literal `{s}`: `{tok}` at column {col} is not {what}"
    ))
}

pub fn int_list(s: &str) -> CliResult<Vec<i64>> {
    tokens(s)?
        .into_iter()
        .map(|(col, tok)| tok.parse().map_err(|_| fault(s, col, tok, "an integer")))
        .collect()
}

pub fn float_list(s: &str) -> CliResult<Vec<f64>> {
    tokens(s)?
        .into_iter()
        .map(|(col, tok)| match tok.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            _ => Err(fault(s, col, tok, "a finite number")),
        })
        .collect()
}

/// Exact value of `a/b`, an integer or a finite decimal such as `0.125`.
fn rational(tok: &str) -> Option<BigRational> {
    if tok.contains('/') {
        return BigRational::from_str(tok).ok();
    }
    let (neg, digits) = match tok.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, tok),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let mut num = BigInt::zero();
    for c in int_part.chars().chain(frac_part.chars()) {
        num = num * 10 + BigInt::from(c.to_digit(10)?);
    }
    let den = BigInt::from(10u32).pow(frac_part.len() as u32);
    let r = BigRational::new(num, den);
    Some(if neg { -r } else { r })
}

pub fn rational_list(s: &str) -> CliResult<Vec<BigRational>> {
    tokens(s)?
        .into_iter()
        .map(|(col, tok)| rational(tok).ok_or_else(|| fault(s, col, tok, "an exact fraction or decimal")))
        .collect()
}

/// `z` for the integers, `zM`, `z/M` or `z/Mz` for ℤ/Mℤ.
pub fn group(s: &str) -> CliResult<Ambient> {
    let lower = s.trim().to_ascii_lowercase();
    let Some(rest) = lower.strip_prefix('z') else {
        return Err(CliError::usage(format!("unknown group `{s}`: expected z or zM")));
    };
    if rest.is_empty() {
        return Ok(Ambient::Integers);
    }
    let rest = rest.strip_prefix('/').unwrap_or(rest);
    let rest = rest.strip_suffix('z').unwrap_or(rest);
    match rest.parse::<u64>() {
        Ok(m) if m > 0 => Ok(Ambient::Cyclic(m)),
        _ => Err(CliError::usage(format!(
            "unknown group `{s}`: modulus `{rest}` is not a positive integer"
        ))),
    }
}

/// Channel rows `p00,p01,…/p10,p11,…`, one row per input symbol.
pub fn channel_rows(s: &str) -> CliResult<Vec<Vec<f64>>> {
    s.split('/')
        .map(|row| float_list(row).map_err(|e| CliError::usage(format!("in channel `{s}`: {e}"))))
        .collect()
}

/// Parses `"auto"` or a list of kernel coefficients.
pub fn coefficients(s: &str) -> CliResult<Option<Vec<u32>>> {
    if s.trim().eq_ignore_ascii_case("auto") {
        return Ok(None);
    }
    let values = int_list(s)?;
    values
        .iter()
        .map(|&c| {
            u32::try_from(c)
                .ok()
                .filter(|c| *c > 0)
                .ok_or_else(|| CliError::usage(format!("kernel coefficient {c} must be positive")))
        })
        .collect::<CliResult<Vec<_>>>()
        .map(Some)
}
