//! Lattice polytopes and their basic predicates.

mod ehrhart;
mod io;

pub use ehrhart::EhrhartData;
pub use io::{format_polytope, parse_polytope};

use std::collections::{HashMap, HashSet, VecDeque};
use std::ops::ControlFlow;
use std::sync::OnceLock;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::cone::{extreme_rays_of, span_coefficients, Cone};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::{self, Matrix, Vector};
use crate::scalar::{floor_div, Int};

/// A facet inequality `normal · x >= -offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Facet<Z> {
    pub normal: Vector<Z>,
    pub offset: Z,
}

impl<Z: Int> Facet<Z> {
    /// `normal · x + offset`, non-negative exactly on the facet's half-space.
    pub fn slack(&self, x: &Vector<Z>) -> Z {
        self.normal.dot(x) + self.offset.clone()
    }
}

/// An edge between two vertices (indices into the vertex list).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge<Z> {
    pub a: usize,
    pub b: usize,
    pub length: Z,
}

/// A full-dimensional lattice polytope with its face data precomputed.
/// Lattice points are enumerated on first use.
#[derive(Clone, Debug)]
pub struct Polytope<Z> {
    dim: usize,
    vertices: Vec<Vector<Z>>,
    facets: Vec<Facet<Z>>,
    vertex_facets: Vec<Vec<usize>>,
    edges: Vec<Edge<Z>>,
    neighbors: Vec<Vec<usize>>,
    points: OnceLock<LatticePoints<Z>>,
}

#[derive(Clone, Debug)]
struct LatticePoints<Z> {
    sorted: Vec<Vector<Z>>,
    spans_lattice: bool,
}

impl<Z: PartialEq> PartialEq for Polytope<Z> {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl<Z: Eq> Eq for Polytope<Z> {}

impl<Z: Int> Polytope<Z> {
    /// Convex hull of `points` in `Z^dim`. Lower-dimensional hulls are rejected.
    pub fn from_points(dim: usize, points: &[Vector<Z>]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invalid("polytope dimension must be positive".into()));
        }
        if points.is_empty() {
            return Err(Error::Invalid("empty point set".into()));
        }
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::Invalid(format!("point {p} does not have dimension {dim}")));
        }
        let lifted: Vec<Vector<Z>> = points.iter().map(|p| p.extended(Z::one())).collect();
        let cone = Cone::from_generators_in(dim + 1, lifted)?;
        if !cone.is_full_dimensional() {
            return Err(Error::Degenerate {
                dim: cone.dim().saturating_sub(1),
                ambient: dim,
            });
        }
        let mut vertices: Vec<Vector<Z>> = cone.extreme_rays().iter().map(Vector::truncated).collect();
        vertices.sort();
        let mut facets: Vec<Facet<Z>> = cone
            .support_hyperplanes()
            .iter()
            .map(|h| Facet {
                normal: h.truncated(),
                offset: h.last().clone(),
            })
            .collect();
        facets.sort();
        Ok(Self::assemble(dim, vertices, facets))
    }

    /// The polytope `{x : normal_i · x >= -offset_i}`. Fails if it is empty,
    /// unbounded, lower-dimensional or has a non-integral vertex.
    pub fn from_inequalities(dim: usize, facets: &[Facet<Z>]) -> Result<Self> {
        let mut ineqs: Vec<Vector<Z>> = facets.iter().map(|f| f.normal.extended(f.offset.clone())).collect();
        ineqs.push(Vector::unit(dim + 1, dim));
        let rays = match extreme_rays_of(&ineqs, dim + 1) {
            Ok(r) => r,
            Err(Error::NotPointed { .. }) => {
                return Err(Error::Invalid("inequalities do not describe a polytope".into()))
            }
            Err(e) => return Err(e),
        };
        let mut vertices = Vec::with_capacity(rays.len());
        for r in rays {
            let t = r.last().clone();
            if t.is_zero() {
                return Err(Error::Invalid("inequalities describe an unbounded region".into()));
            }
            let x = r.truncated();
            if x.coords().iter().any(|c| !c.is_multiple_of(&t)) {
                let q: Vec<String> = x
                    .coords()
                    .iter()
                    .map(|c| Ratio::new(c.clone(), t.clone()).to_string())
                    .collect();
                return Err(Error::NonIntegralVertex(format!("({})", q.join(","))));
            }
            vertices.push(x.div_exact(&t));
        }
        if vertices.is_empty() {
            return Err(Error::Invalid("inequalities describe the empty set".into()));
        }
        Self::from_points(dim, &vertices)
    }

    fn assemble(dim: usize, vertices: Vec<Vector<Z>>, facets: Vec<Facet<Z>>) -> Self {
        let vertex_facets: Vec<Vec<usize>> = vertices
            .iter()
            .map(|v| (0..facets.len()).filter(|&i| facets[i].slack(v).is_zero()).collect())
            .collect();
        let mut edges = Vec::new();
        let mut neighbors = vec![Vec::new(); vertices.len()];
        for a in 0..vertices.len() {
            for b in a + 1..vertices.len() {
                let common: Vec<Vector<Z>> = vertex_facets[a]
                    .iter()
                    .filter(|i| vertex_facets[b].contains(i))
                    .map(|&i| facets[i].normal.clone())
                    .collect();
                let rank = if common.is_empty() {
                    0
                } else {
                    Matrix::from_rows(common, dim).rank()
                };
                if rank + 1 == dim {
                    let length = (&vertices[b] - &vertices[a]).lattice_length();
                    edges.push(Edge { a, b, length });
                    neighbors[a].push(b);
                    neighbors[b].push(a);
                }
            }
        }
        Polytope {
            dim,
            vertices,
            facets,
            vertex_facets,
            edges,
            neighbors,
            points: OnceLock::new(),
        }
    }

    fn points(&self) -> &LatticePoints<Z> {
        self.points.get_or_init(|| {
            let mut sorted = Vec::new();
            let _ = for_each_lattice_point(self.dim, &self.vertices, &self.facets, &Z::one(), |x| {
                sorted.push(x.clone());
                ControlFlow::<()>::Continue(())
            });
            let p0 = &sorted[0];
            let diffs: Vec<Vector<Z>> = sorted[1..].iter().map(|p| p - p0).collect();
            let spans_lattice = lattice::generates_lattice(&diffs, self.dim);
            LatticePoints { sorted, spans_lattice }
        })
    }

    /// `|P ∩ Z^d|` if it is at most `cap`, without storing the points.
    pub fn lattice_point_count_capped(&self, cap: usize) -> Option<usize> {
        if let Some(p) = self.points.get() {
            return (p.sorted.len() <= cap).then_some(p.sorted.len());
        }
        let mut n = 0usize;
        let flow = for_each_lattice_point(self.dim, &self.vertices, &self.facets, &Z::one(), |_| {
            n += 1;
            if n > cap {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        flow.is_continue().then_some(n)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[Vector<Z>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet<Z>] {
        &self.facets
    }

    pub fn edges(&self) -> &[Edge<Z>] {
        &self.edges
    }

    /// Indices of the vertices adjacent to vertex `i`, increasing.
    pub fn adjacent_vertices(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    /// Indices of the facets containing vertex `i`.
    pub fn facets_at(&self, i: usize) -> &[usize] {
        &self.vertex_facets[i]
    }

    /// Lattice points in lexicographic order.
    pub fn lattice_points(&self) -> &[Vector<Z>] {
        &self.points().sorted
    }

    /// True iff the lattice points generate `Z^d` as an affine lattice.
    pub fn spans_lattice(&self) -> bool {
        self.points().spans_lattice
    }

    pub fn vertex_index(&self, v: &Vector<Z>) -> Option<usize> {
        self.vertices.binary_search(v).ok()
    }

    pub fn contains(&self, x: &Vector<Z>) -> bool {
        self.facets.iter().all(|f| !f.slack(x).is_negative())
    }

    pub fn is_lattice_point(&self, x: &Vector<Z>) -> bool {
        self.lattice_points().binary_search(x).is_ok()
    }

    /// True iff exactly `d` facets meet in every vertex.
    pub fn is_simple(&self) -> bool {
        self.vertex_facets.iter().all(|f| f.len() == self.dim)
    }

    /// Primitive edge directions at vertex `i`.
    pub fn edge_directions(&self, i: usize) -> Vec<Vector<Z>> {
        self.neighbors[i]
            .iter()
            .map(|&j| {
                (&self.vertices[j] - &self.vertices[i])
                    .primitive()
                    .expect("distinct vertices")
            })
            .collect()
    }

    /// The lattice points next to vertex `i` on its edges, in the order of
    /// [`Polytope::adjacent_vertices`].
    pub fn lattice_neighbors(&self, i: usize) -> Vec<Vector<Z>> {
        let v = &self.vertices[i];
        self.edge_directions(i).iter().map(|e| v + e).collect()
    }

    fn is_smooth_at(&self, i: usize) -> bool {
        self.neighbors[i].len() == self.dim && lattice::is_unimodular_basis(&self.edge_directions(i))
    }

    /// The first vertex at which `P` fails to be smooth.
    pub fn non_smooth_vertex(&self) -> Option<&Vector<Z>> {
        (0..self.vertices.len())
            .find(|&i| !self.is_smooth_at(i))
            .map(|i| &self.vertices[i])
    }

    /// Every vertex is simple with primitive edge directions forming a basis.
    pub fn is_smooth(&self) -> bool {
        self.non_smooth_vertex().is_none()
    }

    /// The cone generated by `x - v` over the vertices `x` of `P`.
    pub fn corner_cone(&self, v: &Vector<Z>) -> Result<Cone<Z>> {
        let i = self.vertex_index(v).ok_or_else(|| Error::NotAVertex(v.to_string()))?;
        Ok(self.corner_cone_at(i))
    }

    fn corner_cone_at(&self, i: usize) -> Cone<Z> {
        let v = &self.vertices[i];
        let gens: Vec<Vector<Z>> = self.vertices.iter().filter(|w| *w != v).map(|w| w - v).collect();
        Cone::from_generators_in(self.dim, gens).expect("corner cones of a polytope are pointed")
    }

    /// A vertex `v` and a Hilbert basis element `h` of its corner cone with
    /// `v + h` outside `P`, if any.
    pub fn very_ampleness_witness(&self) -> Option<(Vector<Z>, Vector<Z>)> {
        (0..self.vertices.len())
            .into_par_iter()
            .filter(|&i| !self.is_smooth_at(i))
            .filter_map(|i| {
                let v = &self.vertices[i];
                self.corner_cone_at(i)
                    .hilbert_basis()
                    .into_iter()
                    .find(|h| !self.contains(&(v + h)))
                    .map(|h| (v.clone(), h))
            })
            .min()
    }

    /// Every Hilbert basis element of every corner cone is realized by a
    /// lattice point of `P`.
    pub fn is_very_ample(&self) -> bool {
        self.very_ampleness_witness().is_none()
    }

    /// Hilbert basis of the cone over `P × {1}`, sorted.
    pub fn homogenized_hilbert_basis(&self) -> Vec<Vector<Z>> {
        let gens: Vec<Vector<Z>> = self
            .vertices
            .iter()
            .chain(self.lattice_points().iter().filter(|p| self.vertex_index(p).is_none()))
            .map(|p| p.extended(Z::one()))
            .collect();
        Cone::from_generators_in(self.dim + 1, gens)
            .expect("cone over a polytope is pointed")
            .hilbert_basis()
    }

    /// A Hilbert basis element of the cone over `P × {1}` at height two or
    /// more, if any.
    pub fn normality_witness(&self) -> Option<Vector<Z>> {
        self.homogenized_hilbert_basis()
            .into_iter()
            .find(|h| !h.last().is_one())
    }

    /// True iff every lattice point of `kP × {k}` is a sum of `k` lattice
    /// points of `P × {1}`.
    pub fn is_normal(&self) -> bool {
        self.normality_witness().is_none()
    }

    /// Minimal generators of the monoid generated by `x - v`, `x` a lattice
    /// point of `P`.
    pub fn monoid_hilbert_basis(&self, v: &Vector<Z>) -> Result<Vec<Vector<Z>>> {
        let i = self.vertex_index(v).ok_or_else(|| Error::NotAVertex(v.to_string()))?;
        let v = &self.vertices[i];
        if self.is_smooth_at(i) {
            let mut dirs = self.edge_directions(i);
            dirs.sort();
            return Ok(dirs);
        }
        let grading = self.corner_cone_at(i).grading();
        let mut gens: Vec<(Z, Vector<Z>)> = self
            .lattice_points()
            .iter()
            .filter(|x| *x != v)
            .map(|x| {
                let g = x - v;
                (grading.dot(&g), g)
            })
            .collect();
        gens.sort();
        let mut memo: HashMap<Vector<Z>, bool> = HashMap::new();
        let all: Vec<Vector<Z>> = gens.iter().map(|(_, g)| g.clone()).collect();
        let mut basis = Vec::new();
        for (_, g) in &gens {
            let reducible = all
                .iter()
                .any(|t| t != g && in_monoid(&(g - t), &all, &grading, &mut memo));
            if !reducible {
                basis.push(g.clone());
            }
        }
        basis.sort();
        Ok(basis)
    }

    /// For a simple polytope: every `x` with `x - v` in the Hilbert basis of
    /// the monoid at `v` lies in the convex hull of `v` and the lattice
    /// points next to `v` on its edges.
    pub fn hc_condition(&self) -> Result<bool> {
        if let Some(i) = (0..self.vertices.len()).find(|&i| self.vertex_facets[i].len() != self.dim) {
            return Err(Error::NotSimple(self.vertices[i].to_string()));
        }
        for i in 0..self.vertices.len() {
            let v = &self.vertices[i];
            let edges = self.edge_directions(i);
            for h in self.monoid_hilbert_basis(v)? {
                let Some(mu) = span_coefficients(&edges, &h) else {
                    return Ok(false);
                };
                let total = mu.iter().fold(Ratio::zero(), |a: Ratio<Z>, m| a + m.clone());
                if mu.iter().any(|m| m.is_negative()) || total > Ratio::one() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Rays are the inner facet normals in facet order; the maximal cone of
    /// vertex `i` is spanned by the normals of the facets through it.
    pub fn normal_fan(&self) -> Fan<Z> {
        let rays = self.facets.iter().map(|f| f.normal.clone()).collect();
        Fan::new(self.dim, rays, self.vertex_facets.clone())
    }

    /// The dilation `cP`.
    pub fn dilate(&self, c: &Z) -> Self {
        assert!(c.is_positive(), "dilation factor must be positive");
        let vertices = self.vertices.iter().map(|v| v.scale(c)).collect();
        let facets = self
            .facets
            .iter()
            .map(|f| Facet {
                normal: f.normal.clone(),
                offset: f.offset.clone() * c.clone(),
            })
            .collect();
        Self::assemble(self.dim, vertices, facets)
    }

    /// `P + t`.
    pub fn translate(&self, t: &Vector<Z>) -> Self {
        let vertices = self.vertices.iter().map(|v| v + t).collect();
        let facets = self
            .facets
            .iter()
            .map(|f| Facet {
                normal: f.normal.clone(),
                offset: f.offset.clone() - f.normal.dot(t),
            })
            .collect();
        Self::assemble(self.dim, vertices, facets)
    }

    /// Number of lattice points of `kP`.
    pub fn count_dilated(&self, k: &Z) -> usize {
        if k.is_zero() {
            return 1;
        }
        let vertices: Vec<Vector<Z>> = self.vertices.iter().map(|v| v.scale(k)).collect();
        let mut n = 0usize;
        let _ = for_each_lattice_point(self.dim, &vertices, &self.facets, k, |_| {
            n += 1;
            ControlFlow::<()>::Continue(())
        });
        n
    }

    pub fn ehrhart(&self) -> EhrhartData<Z> {
        EhrhartData::of(self)
    }

    /// True iff `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.vertices.iter().all(|v| other.contains(v))
    }
}

/// Membership in the monoid generated by `gens`, by recursion on the grading.
fn in_monoid<Z: Int>(
    y: &Vector<Z>,
    gens: &[Vector<Z>],
    grading: &Vector<Z>,
    memo: &mut HashMap<Vector<Z>, bool>,
) -> bool {
    if y.is_zero() {
        return true;
    }
    if !grading.dot(y).is_positive() {
        return false;
    }
    if let Some(&known) = memo.get(y) {
        return known;
    }
    let deg = grading.dot(y);
    let result = gens
        .iter()
        .filter(|g| grading.dot(g) <= deg)
        .any(|g| in_monoid(&(y - g), gens, grading, memo));
    memo.insert(y.clone(), result);
    result
}

/// Visits the integer points of `{x : normal · x >= -k·offset}` in
/// lexicographic order. `vertices` (of the dilated polytope) bound the first
/// `d - 1` coordinates; the last one is solved for on each fiber.
fn for_each_lattice_point<Z: Int, B>(
    dim: usize,
    vertices: &[Vector<Z>],
    facets: &[Facet<Z>],
    k: &Z,
    mut visit: impl FnMut(&Vector<Z>) -> ControlFlow<B>,
) -> ControlFlow<B> {
    let last = dim - 1;
    let lo: Vec<Z> = (0..dim)
        .map(|i| vertices.iter().map(|v| v[i].clone()).min().expect("vertices"))
        .collect();
    let hi: Vec<Z> = (0..dim)
        .map(|i| vertices.iter().map(|v| v[i].clone()).max().expect("vertices"))
        .collect();
    let offsets: Vec<Z> = facets.iter().map(|f| f.offset.clone() * k.clone()).collect();
    let mut x = lo.clone();
    loop {
        // a·t >= -(rest) for each facet, with a the last normal coordinate
        let mut t_lo = lo[last].clone();
        let mut t_hi = hi[last].clone();
        for (f, o) in facets.iter().zip(&offsets) {
            let a = &f.normal[last];
            let rest = (0..last).fold(o.clone(), |acc, i| acc + f.normal[i].clone() * x[i].clone());
            if a.is_zero() {
                if rest.is_negative() {
                    t_hi = t_lo.clone() - Z::one();
                    break;
                }
            } else if a.is_positive() {
                t_lo = t_lo.max(-floor_div(&rest, a));
            } else {
                t_hi = t_hi.min(floor_div(&rest, &-a.clone()));
            }
        }
        let mut t = t_lo;
        while t <= t_hi {
            x[last] = t.clone();
            visit(&Vector::new(x.clone()))?;
            t = t + Z::one();
        }
        // odometer over the first d - 1 coordinates, last fastest
        let mut i = last;
        loop {
            if i == 0 {
                return ControlFlow::Continue(());
            }
            i -= 1;
            if x[i] < hi[i] {
                x[i] = x[i].clone() + Z::one();
                break;
            }
            x[i] = lo[i].clone();
        }
    }
}

/// Lattice points reachable from vertex `v` by steps in the monoid Hilbert
/// basis, staying inside `P`.
pub(crate) fn reachable_from<Z: Int>(p: &Polytope<Z>, v: &Vector<Z>, steps: &[Vector<Z>]) -> Vec<Vector<Z>> {
    let mut seen: HashSet<Vector<Z>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(v.clone());
    queue.push_back(v.clone());
    while let Some(x) = queue.pop_front() {
        for h in steps {
            let y = &x + h;
            if p.contains(&y) && seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<Vector<Z>> = seen.into_iter().collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests;
