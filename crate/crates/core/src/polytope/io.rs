//! The polytope text format:
//!
//! ```text
//! polytope <d> <n>
//! <n lines of d integers>
//! # optional comments
//! ```

use std::fmt::Write as _;
use std::str::FromStr;

use super::Polytope;
use crate::error::Result;
use crate::lattice::Vector;
use crate::scalar::Int;
use crate::textio::{content_lines, parse_err, parse_header, parse_vector, vector_line};

/// Parses the point list of a polytope file: `(d, points)`.
pub fn parse_points<Z: Int + FromStr>(text: &str) -> Result<(usize, Vec<Vector<Z>>)> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let h = parse_header(hl, header, "polytope", 2)?;
    let (d, n) = (h[0], h[1]);
    let mut points = Vec::with_capacity(n);
    let mut last = hl;
    for _ in 0..n {
        let (l, t) = lines
            .next()
            .ok_or_else(|| parse_err(last + 1, format!("expected {n} vertex lines")))?;
        points.push(parse_vector(l, t, d)?);
        last = l;
    }
    if let Some((l, _)) = lines.next() {
        return Err(parse_err(l, "unexpected content after the vertex list"));
    }
    Ok((d, points))
}

/// Parses a polytope file and builds the hull of its points.
pub fn parse_polytope<Z: Int + FromStr>(text: &str) -> Result<Polytope<Z>> {
    let (d, points) = parse_points(text)?;
    Polytope::from_points(d, &points)
}

/// Writes the vertices of `p` in the polytope format.
pub fn format_polytope<Z: Int>(p: &Polytope<Z>) -> String {
    let mut s = String::new();
    writeln!(s, "polytope {} {}", p.dim(), p.vertices().len()).unwrap();
    for v in p.vertices() {
        writeln!(s, "{}", vector_line(v)).unwrap();
    }
    s
}
