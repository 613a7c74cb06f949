//! Chiseling, robustness and vertex shrinking of lattice polytopes.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fan::fan_equals;
use crate::lattice::{self, Matrix, Vector};
use crate::polytope::{Facet, Polytope};
use crate::scalar::Int;
use crate::toric::degree3_check_unchecked;

/// A proper face of a simple polytope, given by the facets containing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face<Z> {
    pub dim: usize,
    /// The facet inequalities vanishing on the face.
    pub facets: Vec<Facet<Z>>,
    /// Vertices of the face, sorted.
    pub vertices: Vec<Vector<Z>>,
}

fn affine_dim<Z: Int>(points: &[Vector<Z>]) -> usize {
    let Some((first, rest)) = points.split_first() else {
        return 0;
    };
    let diffs: Vec<Vector<Z>> = rest.iter().map(|x| x - first).collect();
    if diffs.is_empty() {
        return 0;
    }
    Matrix::from_rows(diffs, first.dim()).rank()
}

fn face_from_facet_indices<Z: Int>(p: &Polytope<Z>, idx: &[usize]) -> Face<Z> {
    let vertices: Vec<Vector<Z>> = (0..p.vertices().len())
        .filter(|&i| idx.iter().all(|f| p.facets_at(i).contains(f)))
        .map(|i| p.vertices()[i].clone())
        .collect();
    Face {
        dim: affine_dim(&vertices),
        facets: idx.iter().map(|&f| p.facets()[f].clone()).collect(),
        vertices,
    }
}

/// Proper faces of a simple polytope ordered by dimension, vertices first;
/// within a dimension by their sorted vertex lists.
pub fn faces<Z: Int>(p: &Polytope<Z>) -> Result<Vec<Face<Z>>> {
    if !p.is_simple() {
        let i = (0..p.vertices().len())
            .find(|&i| p.facets_at(i).len() != p.dim())
            .expect("not simple");
        return Err(Error::NotSimple(p.vertices()[i].to_string()));
    }
    let d = p.dim();
    let mut sets: Vec<Vec<usize>> = Vec::new();
    for i in 0..p.vertices().len() {
        let at = p.facets_at(i);
        for mask in 1u32..(1 << d) {
            let s: Vec<usize> = (0..d).filter(|b| mask >> b & 1 == 1).map(|b| at[b]).collect();
            sets.push(s);
        }
    }
    sets.sort();
    sets.dedup();
    let mut out: Vec<Face<Z>> = sets.iter().map(|s| face_from_facet_indices(p, s)).collect();
    out.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.vertices.cmp(&b.vertices)));
    Ok(out)
}

/// The smallest face containing `points`; fails unless its vertex set is
/// exactly `points` and it is proper.
pub fn face_spanned_by<Z: Int>(p: &Polytope<Z>, points: &[Vector<Z>]) -> Result<Face<Z>> {
    let describe = || points.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
    let idx: Vec<usize> = (0..p.facets().len())
        .filter(|&f| points.iter().all(|x| p.facets()[f].slack(x).is_zero()))
        .collect();
    if idx.is_empty() || points.is_empty() {
        return Err(Error::NotAFace(describe()));
    }
    let face = face_from_facet_indices(p, &idx);
    let mut given = points.to_vec();
    given.sort();
    given.dedup();
    if face.vertices != given {
        return Err(Error::NotAFace(describe()));
    }
    Ok(face)
}

/// Result of chiseling a smooth polytope along a face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiselResult<Z> {
    pub face: Face<Z>,
    /// Sum of the facet forms vanishing on the face.
    pub sigma: Vector<Z>,
    /// Constant value of `sigma` on the face.
    pub b: Z,
    /// Minimum of `sigma` over the vertices off the face.
    pub c: Z,
    /// `(P1, P2)` with `P1 = P ∩ {sigma >= c-1}`, present iff `b < c - 1`.
    pub pieces: Option<(Polytope<Z>, Polytope<Z>)>,
}

impl<Z: Int> ChiselResult<Z> {
    /// The cutting hyperplane as the form `sigma - (c - 1)`, non-negative on `P1`.
    pub fn cut(&self) -> Facet<Z> {
        Facet {
            normal: self.sigma.clone(),
            offset: Z::one() - self.c.clone(),
        }
    }
}

/// Splits `P` along `sigma = c - 1` when the face is at lattice distance at
/// least 2 from every other vertex.
///
/// Both pieces are checked to be smooth, the normal fan of `P1` is checked
/// to be the stellar subdivision of the normal fan of `P` at `sigma`, and for
/// a vertex the small piece is checked to be a dilated unimodular simplex.
/// A failed check is reported as [`Error::Invariant`].
pub fn chisel<Z: Int>(p: &Polytope<Z>, face: &Face<Z>) -> Result<ChiselResult<Z>> {
    if !p.is_smooth() {
        return Err(Error::NotSmooth("chiseling"));
    }
    let points: Vec<Vector<Z>> = face.vertices.clone();
    let checked = face_spanned_by(p, &points)?;
    if checked.facets != face.facets || checked.vertices.len() == p.vertices().len() {
        return Err(Error::NotAFace(format!(
            "{} facets through {} vertices",
            face.facets.len(),
            points.len()
        )));
    }
    chisel_unchecked(p, face)
}

fn chisel_unchecked<Z: Int>(p: &Polytope<Z>, face: &Face<Z>) -> Result<ChiselResult<Z>> {
    let d = p.dim();
    let sigma = face.facets.iter().fold(Vector::zero(d), |acc, f| &acc + &f.normal);
    let b = face.facets.iter().fold(Z::zero(), |acc, f| acc - f.offset.clone());
    let c = p
        .vertices()
        .iter()
        .filter(|v| face.vertices.binary_search(v).is_err())
        .map(|v| sigma.dot(v))
        .min()
        .expect("a proper face misses some vertex");
    let mut result = ChiselResult {
        face: face.clone(),
        sigma,
        b,
        c,
        pieces: None,
    };
    if result.b < result.c.clone() - Z::one() {
        result.pieces = Some(split_pieces(p, &result)?);
    }
    Ok(result)
}

fn split_pieces<Z: Int>(p: &Polytope<Z>, r: &ChiselResult<Z>) -> Result<(Polytope<Z>, Polytope<Z>)> {
    let d = p.dim();
    let cut = r.cut();
    let opposite = Facet {
        normal: -&cut.normal,
        offset: -cut.offset.clone(),
    };
    let piece = |extra: Facet<Z>| {
        let mut ineqs = p.facets().to_vec();
        ineqs.push(extra);
        Polytope::from_inequalities(d, &ineqs)
    };
    let invariant = |e: Error| Error::Invariant(format!("chiseled piece is not a lattice polytope: {e}"));
    let p1 = piece(cut).map_err(invariant)?;
    let p2 = piece(opposite).map_err(invariant)?;
    if !(p1.is_smooth() && p2.is_smooth()) {
        return Err(Error::Invariant(
            "chiseling a smooth polytope produced a non-smooth piece".into(),
        ));
    }
    let mut expected = p.normal_fan();
    expected.stellar_insert(&r.sigma);
    if !fan_equals(&expected, &p1.normal_fan()) {
        return Err(Error::Invariant(
            "normal fan of the large piece is not the stellar subdivision".into(),
        ));
    }
    if r.face.dim == 0 && simplex_multiple(&p2).is_none() {
        return Err(Error::Invariant(
            "piece cut off at a vertex is not a multiple of a unimodular simplex".into(),
        ));
    }
    Ok((p1, p2))
}

/// `Some(k)` iff `P` is unimodularly equivalent to `k` times the unit simplex.
pub fn simplex_multiple<Z: Int>(p: &Polytope<Z>) -> Option<Z> {
    let d = p.dim();
    if p.vertices().len() != d + 1 {
        return None;
    }
    let v0 = &p.vertices()[0];
    let diffs: Vec<Vector<Z>> = p.vertices()[1..].iter().map(|w| w - v0).collect();
    let k = diffs[0].content();
    if diffs.iter().any(|e| e.content() != k) {
        return None;
    }
    let basis: Vec<Vector<Z>> = diffs.iter().map(|e| e.div_exact(&k)).collect();
    lattice::is_unimodular_basis(&basis).then_some(k)
}

/// Whether a smooth polytope admits no chisel, with the first chiselable
/// face otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Robustness<Z> {
    pub robust: bool,
    pub witness: Option<Face<Z>>,
}

/// Robustness by attempting a chisel at every proper face, cross-checked
/// against the edge criterion: every face has an emanating edge of lattice
/// length 1.
pub fn is_robust<Z: Int>(p: &Polytope<Z>) -> Result<Robustness<Z>> {
    if !p.is_smooth() {
        return Err(Error::NotSmooth("chiseling"));
    }
    let faces = faces(p)?;
    let witness = faces.iter().find(|f| chiselable(p, f)).cloned();
    let by_edges = faces.iter().find(|f| !has_unit_emanating_edge(p, f)).cloned();
    if witness != by_edges {
        return Err(Error::Invariant(
            "chisel test and edge-length test disagree on robustness".into(),
        ));
    }
    Ok(Robustness {
        robust: witness.is_none(),
        witness,
    })
}

fn chiselable<Z: Int>(p: &Polytope<Z>, face: &Face<Z>) -> bool {
    let d = p.dim();
    let sigma = face.facets.iter().fold(Vector::zero(d), |acc, f| &acc + &f.normal);
    let b = face.facets.iter().fold(Z::zero(), |acc, f| acc - f.offset.clone());
    let c = p
        .vertices()
        .iter()
        .filter(|v| face.vertices.binary_search(v).is_err())
        .map(|v| sigma.dot(v))
        .min()
        .expect("proper face");
    b < c - Z::one()
}

/// True iff some edge with exactly one endpoint on the face has length 1.
pub fn has_unit_emanating_edge<Z: Int>(p: &Polytope<Z>, face: &Face<Z>) -> bool {
    let on = |i: usize| face.vertices.binary_search(&p.vertices()[i]).is_ok();
    p.edges().iter().any(|e| on(e.a) != on(e.b) && e.length.is_one())
}

/// One accepted cut of [`chisel_reduce`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiselStep<Z> {
    pub face: Face<Z>,
    pub sigma: Vector<Z>,
    pub b: Z,
    pub c: Z,
    /// The piece that was kept.
    pub kept: Polytope<Z>,
    /// The piece cut off, kept for audit only.
    pub discarded: Polytope<Z>,
}

/// Chisels repeatedly at faces chosen in a seeded random order, keeping the
/// large piece, until the polytope is robust.
pub fn chisel_reduce<Z: Int>(p: &Polytope<Z>, seed: u64) -> Result<(Polytope<Z>, Vec<ChiselStep<Z>>)> {
    if !p.is_smooth() {
        return Err(Error::NotSmooth("chiseling"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = p.clone();
    let mut steps = Vec::new();
    loop {
        let candidates: Vec<Face<Z>> = faces(&current)?
            .into_iter()
            .filter(|f| chiselable(&current, f))
            .collect();
        let Some(face) = candidates.choose(&mut rng) else {
            return Ok((current, steps));
        };
        let r = chisel_unchecked(&current, face)?;
        let cut = r.cut();
        let (kept, discarded) = r.pieces.expect("chiselable face splits");
        // the face's vertices are lattice points cut off from the kept piece
        if face.vertices.iter().any(|v| !cut.slack(v).is_negative()) {
            return Err(Error::Invariant("chiseling did not remove a lattice point".into()));
        }
        steps.push(ChiselStep {
            face: r.face,
            sigma: r.sigma,
            b: r.b,
            c: r.c,
            kept: kept.clone(),
            discarded,
        });
        current = kept;
    }
}

/// One polytope of a shrinking run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShrinkStep<Z> {
    /// The vertex removed to reach this polytope (`None` for the start).
    pub removed: Option<Vector<Z>>,
    pub polytope: Polytope<Z>,
    pub normal: bool,
    pub simple: bool,
    pub smooth: bool,
}

impl<Z: Int> ShrinkStep<Z> {
    /// A very ample polytope that is not normal.
    pub fn is_non_normal_find(&self) -> bool {
        !self.normal
    }

    /// A non-normal find that is simple or smooth.
    pub fn is_discovery(&self) -> bool {
        !self.normal && (self.simple || self.smooth)
    }
}

fn shrink_step<Z: Int>(removed: Option<Vector<Z>>, polytope: Polytope<Z>) -> ShrinkStep<Z> {
    ShrinkStep {
        removed,
        normal: polytope.is_normal(),
        simple: polytope.is_simple(),
        smooth: polytope.is_smooth(),
        polytope,
    }
}

/// Starting from a normal polytope, repeatedly drops a vertex (in seeded
/// random order) as long as the hull of the remaining lattice points is
/// full-dimensional, spans the lattice and is very ample.
pub fn shrink<Z: Int>(p: &Polytope<Z>, seed: u64) -> Result<Vec<ShrinkStep<Z>>> {
    if !p.is_normal() {
        return Err(Error::Invalid("shrinking starts from a normal polytope".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut steps = vec![shrink_step(None, p.clone())];
    let mut current = p.clone();
    'outer: loop {
        let mut order: Vec<Vector<Z>> = current.vertices().to_vec();
        order.shuffle(&mut rng);
        for v in order {
            let rest: Vec<Vector<Z>> = current.lattice_points().iter().filter(|x| **x != v).cloned().collect();
            let Ok(q) = Polytope::from_points(current.dim(), &rest) else {
                continue;
            };
            if q.spans_lattice() && q.is_very_ample() {
                steps.push(shrink_step(Some(v), q.clone()));
                current = q;
                continue 'outer;
            }
        }
        return Ok(steps);
    }
}

/// Outcome of checking the degree bound for a polytope split by a hyperplane
/// into two integrally closed pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplitCheck {
    /// A piece is not integrally closed; `whole_needs_degree3` is reported
    /// when `P` itself is normal.
    HypothesesViolated {
        reasons: Vec<String>,
        whole_needs_degree3: Option<bool>,
    },
    /// Both pieces integrally closed. When neither piece needs cubic
    /// generators, neither may `P`.
    Checked {
        pieces_need_degree3: (bool, bool),
        whole_needs_degree3: bool,
        consistent: bool,
    },
}

/// Splits `P` by `cut` (`P1` where the form is non-negative) and checks that
/// `I(P)` needs no cubic generators whenever both pieces are integrally
/// closed and need none.
pub fn split_degree_bound_check<Z: Int>(p: &Polytope<Z>, cut: &Facet<Z>) -> Result<SplitCheck> {
    let d = p.dim();
    let opposite = Facet {
        normal: -&cut.normal,
        offset: -cut.offset.clone(),
    };
    let piece = |extra: &Facet<Z>| {
        let mut ineqs = p.facets().to_vec();
        ineqs.push(extra.clone());
        Polytope::from_inequalities(d, &ineqs).map_err(|e| Error::Invalid(format!("not a split: {e}")))
    };
    let (p1, p2) = (piece(cut)?, piece(&opposite)?);
    if p1 == *p || p2 == *p {
        return Err(Error::Invalid(
            "not a split: the hyperplane does not cut the polytope".into(),
        ));
    }
    let mut reasons = Vec::new();
    for (name, q) in [("P1", &p1), ("P2", &p2)] {
        if !q.spans_lattice() {
            reasons.push(format!("lattice points of {name} do not span the lattice"));
        } else if !q.is_normal() {
            reasons.push(format!("{name} is not normal"));
        }
    }
    if !reasons.is_empty() {
        let whole = if p.spans_lattice() && p.is_normal() {
            Some(degree3_check_unchecked(p)?.needs_generators())
        } else {
            None
        };
        return Ok(SplitCheck::HypothesesViolated {
            reasons,
            whole_needs_degree3: whole,
        });
    }
    let n1 = degree3_check_unchecked(&p1)?.needs_generators();
    let n2 = degree3_check_unchecked(&p2)?.needs_generators();
    // integrally closed pieces make P integrally closed as well
    let whole = degree3_check_unchecked(p)?.needs_generators();
    Ok(SplitCheck::Checked {
        pieces_need_degree3: (n1, n2),
        whole_needs_degree3: whole,
        consistent: n1 || n2 || !whole,
    })
}
