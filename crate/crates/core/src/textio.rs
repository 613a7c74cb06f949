//! Line-oriented helpers shared by the polytope and fan file formats.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lattice::Vector;
use crate::scalar::Int;

/// Numbered lines that are neither blank nor comments.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub(crate) fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub(crate) fn parse_header(line: usize, text: &str, keyword: &str, arity: usize) -> Result<Vec<usize>> {
    let mut words = text.split_whitespace();
    if words.next() != Some(keyword) {
        return Err(parse_err(line, format!("expected header starting with `{keyword}`")));
    }
    let nums: Vec<usize> = words
        .map(|w| {
            w.parse::<usize>()
                .map_err(|_| parse_err(line, format!("bad count `{w}`")))
        })
        .collect::<Result<_>>()?;
    if nums.len() != arity {
        return Err(parse_err(line, format!("`{keyword}` header takes {arity} counts")));
    }
    Ok(nums)
}

pub(crate) fn parse_vector<Z: Int + FromStr>(line: usize, text: &str, dim: usize) -> Result<Vector<Z>> {
    let coords: Vec<Z> = text
        .split_whitespace()
        .map(|w| {
            w.parse::<Z>()
                .map_err(|_| parse_err(line, format!("bad integer `{w}`")))
        })
        .collect::<Result<_>>()?;
    if coords.len() != dim {
        return Err(parse_err(
            line,
            format!("expected {dim} integers, found {}", coords.len()),
        ));
    }
    Ok(Vector::new(coords))
}

pub(crate) fn vector_line<Z: Int>(v: &Vector<Z>) -> String {
    v.coords().iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}
