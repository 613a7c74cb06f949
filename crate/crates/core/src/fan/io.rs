//! The fan text format:
//!
//! ```text
//! fan <d> <s> <m>
//! <s lines of d integers: the rays>
//! <m lines of 0-based ray indices: the maximal cones>
//! ```
//!
//! Lines starting with `#` are comments.

use std::fmt::Write as _;
use std::str::FromStr;

use itertools::Itertools;

use super::Fan;
use crate::error::Result;
use crate::scalar::Int;
use crate::textio::{content_lines, parse_err, parse_header, parse_vector, vector_line};

pub fn parse_fan<Z: Int + FromStr>(text: &str) -> Result<Fan<Z>> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let h = parse_header(hl, header, "fan", 3)?;
    let (d, s, m) = (h[0], h[1], h[2]);
    let mut last = hl;
    let mut rays = Vec::with_capacity(s);
    for _ in 0..s {
        let (l, t) = lines
            .next()
            .ok_or_else(|| parse_err(last + 1, format!("expected {s} ray lines")))?;
        let r = parse_vector::<Z>(l, t, d)?;
        if r.is_zero() {
            return Err(parse_err(l, "zero ray"));
        }
        rays.push(r.primitive()?);
        last = l;
    }
    let mut cones = Vec::with_capacity(m);
    for _ in 0..m {
        let (l, t) = lines
            .next()
            .ok_or_else(|| parse_err(last + 1, format!("expected {m} cone lines")))?;
        let idx: Vec<usize> = t
            .split_whitespace()
            .map(|w| match w.parse::<usize>() {
                Ok(i) if i < s => Ok(i),
                _ => Err(parse_err(l, format!("bad ray index `{w}`"))),
            })
            .collect::<Result<_>>()?;
        if idx.is_empty() {
            return Err(parse_err(l, "empty cone"));
        }
        cones.push(idx);
        last = l;
    }
    if let Some((l, _)) = lines.next() {
        return Err(parse_err(l, "unexpected content after the cone list"));
    }
    Ok(Fan::new(d, rays, cones))
}

pub fn format_fan<Z: Int>(f: &Fan<Z>) -> String {
    let mut s = String::new();
    writeln!(s, "fan {} {} {}", f.dim(), f.rays().len(), f.cones().len()).unwrap();
    for r in f.rays() {
        writeln!(s, "{}", vector_line(r)).unwrap();
    }
    for c in f.cones() {
        writeln!(s, "{}", c.iter().join(" ")).unwrap();
    }
    s
}
