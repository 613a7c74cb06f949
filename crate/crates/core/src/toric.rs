//! Toric ideals of lattice polytopes in degrees two and three.
//!
//! Variables are indexed by the lattice points of `P` in lexicographic
//! order, and the term order is graded reverse lexicographic with the
//! lexicographically smallest point as the largest variable.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::Vector;
use crate::polytope::Polytope;
use crate::scalar::{binomial, int, Int};

/// Upper bound on the number of degree-3 monomials handled by the dense tables.
pub const MAX_DEGREE3_MONOMIALS: u64 = 60_000_000;

/// `X^plus - X^minus` with sparse exponents over lattice-point indices.
/// `plus` is the leading term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ExponentBinomial {
    pub plus: Vec<(usize, u32)>,
    pub minus: Vec<(usize, u32)>,
    pub degree: u32,
}

impl ExponentBinomial {
    /// Builds the binomial from two monomials given as index multisets; the
    /// grevlex-larger one becomes the leading term.
    pub fn from_monomials(a: &[usize], b: &[usize]) -> Self {
        assert_eq!(a.len(), b.len(), "binomials are homogeneous");
        let (hi, lo) = if grevlex_cmp(a, b) == Ordering::Less {
            (b, a)
        } else {
            (a, b)
        };
        ExponentBinomial {
            plus: sparse(hi),
            minus: sparse(lo),
            degree: a.len() as u32,
        }
    }

    /// `Σ a_x x` over the plus part.
    pub fn multidegree<Z: Int>(&self, points: &[Vector<Z>]) -> Vector<Z> {
        weighted_sum(&self.plus, points)
    }

    /// True iff both sides have the same weighted point sum and degree.
    pub fn is_homogeneous_relation<Z: Int>(&self, points: &[Vector<Z>]) -> bool {
        let deg = |e: &[(usize, u32)]| e.iter().map(|(_, a)| a).sum::<u32>();
        self.plus != self.minus
            && deg(&self.plus) == self.degree
            && deg(&self.minus) == self.degree
            && weighted_sum(&self.plus, points) == weighted_sum(&self.minus, points)
    }

    /// Human-readable form over the given points, e.g. `X(0,0)X(1,1) - X(0,1)X(1,0)`.
    pub fn render<Z: Int>(&self, points: &[Vector<Z>]) -> String {
        let side = |e: &[(usize, u32)]| {
            e.iter()
                .map(|&(i, a)| {
                    if a == 1 {
                        format!("X{}", points[i])
                    } else {
                        format!("X{}^{a}", points[i])
                    }
                })
                .collect::<String>()
        };
        format!("{} - {}", side(&self.plus), side(&self.minus))
    }
}

fn sparse(mono: &[usize]) -> Vec<(usize, u32)> {
    let mut out: Vec<(usize, u32)> = Vec::new();
    let mut sorted = mono.to_vec();
    sorted.sort_unstable();
    for i in sorted {
        match out.last_mut() {
            Some((j, a)) if *j == i => *a += 1,
            _ => out.push((i, 1)),
        }
    }
    out
}

fn weighted_sum<Z: Int>(e: &[(usize, u32)], points: &[Vector<Z>]) -> Vector<Z> {
    let dim = points.first().map_or(0, Vector::dim);
    e.iter().fold(Vector::zero(dim), |acc, &(i, a)| {
        &acc + &points[i].scale(&int(a as i64))
    })
}

/// Grevlex comparison of two monomials of equal degree given as index
/// multisets: the monomial with fewer occurrences of the highest index wins.
fn grevlex_cmp(a: &[usize], b: &[usize]) -> Ordering {
    let mut da = a.to_vec();
    let mut db = b.to_vec();
    da.sort_unstable_by(|x, y| y.cmp(x));
    db.sort_unstable_by(|x, y| y.cmp(x));
    db.cmp(&da)
}

/// Hilbert function values `dim_K (A/in(J))_k` for `k = 0..=3`, where `J`
/// is generated by the quadrics of the toric ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TruncatedHVector {
    pub h0: u64,
    pub h1: u64,
    pub h2: u64,
    pub h3: u64,
}

impl TruncatedHVector {
    pub fn as_array(&self) -> [u64; 4] {
        [self.h0, self.h1, self.h2, self.h3]
    }

    /// Numerator coefficients up to degree 3 of the Hilbert series written
    /// over `(1 - t)^(d+1)`.
    pub fn numerator<Z: Int>(&self, d: usize) -> Vec<Z> {
        numerator_prefix(&self.as_array().map(|h| int::<Z>(h as i64)), d)
    }
}

fn numerator_prefix<Z: Int>(values: &[Z], d: usize) -> Vec<Z> {
    (0..values.len())
        .map(|j| {
            (0..=j).fold(Z::zero(), |acc, i| {
                let term = binomial::<Z>(d as i64 + 1, i as i64) * values[j - i].clone();
                if i % 2 == 0 {
                    acc + term
                } else {
                    acc - term
                }
            })
        })
        .collect()
}

/// Degree-2 fibers of the lattice points: `fiber[i * n + j]` is the index of
/// the class of `p_i + p_j`, and `members[f]` lists its monomials in
/// ascending grevlex order.
struct Degree2Table {
    n: usize,
    fiber: Vec<u32>,
    members: Vec<Vec<[usize; 2]>>,
}

impl Degree2Table {
    fn new<Z: Int>(points: &[Vector<Z>]) -> Self {
        let n = points.len();
        let mut index: HashMap<Vector<Z>, u32> = HashMap::new();
        let mut members: Vec<Vec<[usize; 2]>> = Vec::new();
        let mut fiber = vec![0u32; n * n];
        for i in 0..n {
            for j in i..n {
                let s = &points[i] + &points[j];
                let next = members.len() as u32;
                let f = *index.entry(s).or_insert(next);
                if f == next {
                    members.push(Vec::new());
                }
                members[f as usize].push([i, j]);
                fiber[i * n + j] = f;
                fiber[j * n + i] = f;
            }
        }
        for m in &mut members {
            m.sort_by(|a, b| grevlex_cmp(a, b));
        }
        Degree2Table { n, fiber, members }
    }

    fn fiber_of(&self, i: usize, j: usize) -> usize {
        self.fiber[i * self.n + j] as usize
    }

    /// The grevlex-minimal monomial of the fiber of `X_i X_j`.
    fn standard(&self, i: usize, j: usize) -> [usize; 2] {
        self.members[self.fiber_of(i, j)][0]
    }

    fn is_standard(&self, i: usize, j: usize) -> bool {
        let s = self.standard(i, j);
        s == [i.min(j), i.max(j)]
    }
}

/// All binomials `X_a X_b - X_c X_d` with `a + b = c + d` and
/// `{a, b} ≠ {c, d}`, each unordered pair of monomials once.
pub fn degree2_binomials<Z: Int>(p: &Polytope<Z>) -> Vec<ExponentBinomial> {
    let table = Degree2Table::new(p.lattice_points());
    let mut out: Vec<ExponentBinomial> = table
        .members
        .iter()
        .flat_map(|fiber| fiber.iter().tuple_combinations())
        .map(|(a, b)| ExponentBinomial::from_monomials(a, b))
        .collect();
    out.sort();
    out
}

/// Degree-2 part of the reduced Gröbner basis of the quadrics: every
/// non-minimal monomial of a fiber minus the fiber's minimal monomial.
pub fn groebner_degree2<Z: Int>(p: &Polytope<Z>) -> Vec<ExponentBinomial> {
    let table = Degree2Table::new(p.lattice_points());
    let mut out: Vec<ExponentBinomial> = table
        .members
        .iter()
        .flat_map(|fiber| {
            fiber[1..]
                .iter()
                .map(move |m| ExponentBinomial::from_monomials(m, &fiber[0]))
        })
        .collect();
    out.sort();
    out
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let up = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = up;
            x = up;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as root so the result is order independent
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

/// Degree-3 monomials `X_i X_j X_k` (`i <= j <= k`) in a fixed enumeration,
/// partitioned into the classes of `J_3`: two monomials are joined when they
/// share a variable and the remaining quadrics lie in the same fiber.
struct Degree3Classes {
    monomials: Vec<[usize; 3]>,
    uf: UnionFind,
}

impl Degree3Classes {
    fn new(table: &Degree2Table) -> Result<Self> {
        let n = table.n;
        let total: u64 = binomial::<i64>(n as i64 + 2, 3) as u64;
        if total > MAX_DEGREE3_MONOMIALS {
            return Err(Error::LimitsExceeded(format!(
                "{total} degree-3 monomials exceed the table limit {MAX_DEGREE3_MONOMIALS}"
            )));
        }
        let nf2 = table.members.len();
        let mut monomials = Vec::with_capacity(total as usize);
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    monomials.push([i, j, k]);
                }
            }
        }
        let mut uf = UnionFind::new(monomials.len());
        // first[t * nf2 + f] is the first monomial X_t · (fiber f) seen so far
        let mut first = vec![u32::MAX; n * nf2];
        for (idx, &[i, j, k]) in monomials.iter().enumerate() {
            for (t, a, b) in [(i, j, k), (j, i, k), (k, i, j)] {
                let key = t * nf2 + table.fiber_of(a, b);
                if first[key] == u32::MAX {
                    first[key] = idx as u32;
                } else {
                    uf.union(first[key], idx as u32);
                }
            }
        }
        Ok(Degree3Classes { monomials, uf })
    }

    fn roots(&mut self) -> Vec<u32> {
        (0..self.monomials.len() as u32)
            .filter(|&m| self.uf.find(m) == m)
            .collect()
    }
}

fn sum3<Z: Int>(points: &[Vector<Z>], m: &[usize; 3]) -> Vector<Z> {
    &(&points[m[0]] + &points[m[1]]) + &points[m[2]]
}

/// Hilbert function of `A / in(J)` in degrees `0..=3`.
pub fn truncated_h_vector<Z: Int>(p: &Polytope<Z>) -> Result<TruncatedHVector> {
    let table = Degree2Table::new(p.lattice_points());
    let mut classes = Degree3Classes::new(&table)?;
    Ok(TruncatedHVector {
        h0: 1,
        h1: table.n as u64,
        h2: table.members.len() as u64,
        h3: classes.roots().len() as u64,
    })
}

/// New degree-3 elements of the reduced Gröbner basis of the quadrics:
/// `m - min(class of m)` for each monomial `m` that is standard with respect
/// to the degree-2 leading terms and not minimal in its class.
pub fn groebner_degree3<Z: Int>(p: &Polytope<Z>) -> Result<Vec<ExponentBinomial>> {
    let table = Degree2Table::new(p.lattice_points());
    let mut classes = Degree3Classes::new(&table)?;
    let mut min_of: HashMap<u32, [usize; 3]> = HashMap::new();
    for idx in 0..classes.monomials.len() {
        let m = classes.monomials[idx];
        let r = classes.uf.find(idx as u32);
        min_of
            .entry(r)
            .and_modify(|cur| {
                if grevlex_cmp(&m, cur) == Ordering::Less {
                    *cur = m;
                }
            })
            .or_insert(m);
    }
    let mut out = Vec::new();
    for idx in 0..classes.monomials.len() {
        let m = classes.monomials[idx];
        let [i, j, k] = m;
        let standard = table.is_standard(i, j) && table.is_standard(i, k) && table.is_standard(j, k);
        let lo = min_of[&classes.uf.find(idx as u32)];
        if standard && lo != m {
            out.push(ExponentBinomial::from_monomials(&m, &lo));
        }
    }
    out.sort();
    Ok(out)
}

/// Degree-3 Gröbner elements by Buchberger's algorithm restricted to S-pairs
/// of degree 3, processing the pairs in an order shuffled by `order_seed`.
///
/// Quadratic in the number of degree-2 leading terms; meant for small
/// polytopes and as a cross-check of [`groebner_degree3`].
pub fn buchberger_degree3<Z: Int>(p: &Polytope<Z>, order_seed: u64) -> Vec<ExponentBinomial> {
    let table = Degree2Table::new(p.lattice_points());
    let leads: Vec<[usize; 2]> = table.members.iter().flat_map(|f| f[1..].iter().copied()).collect();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for a in 0..leads.len() {
        for b in a + 1..leads.len() {
            if lcm3(&leads[a], &leads[b]).is_some() {
                pairs.push((a, b));
            }
        }
    }
    pairs.shuffle(&mut ChaCha8Rng::seed_from_u64(order_seed));

    let mut g3: BTreeMap<[usize; 3], [usize; 3]> = BTreeMap::new();
    for (a, b) in pairs {
        let (u, w) = (leads[a], leads[b]);
        let l = lcm3(&u, &w).expect("filtered");
        let s1 = substitute(&l, &u, &table.standard(u[0], u[1]));
        let s2 = substitute(&l, &w, &table.standard(w[0], w[1]));
        let (n1, n2) = (normal_form(s1, &table, &g3), normal_form(s2, &table, &g3));
        match grevlex_cmp(&n1, &n2) {
            Ordering::Equal => {}
            Ordering::Greater => {
                g3.insert(n1, n2);
            }
            Ordering::Less => {
                g3.insert(n2, n1);
            }
        }
    }
    // inter-reduce the tails
    let leads3: Vec<[usize; 3]> = g3.keys().copied().collect();
    let mut out: Vec<ExponentBinomial> = leads3
        .iter()
        .map(|m| {
            let tail = normal_form(g3[m], &table, &g3);
            ExponentBinomial::from_monomials(m, &tail)
        })
        .collect();
    out.sort();
    out
}

/// The least common multiple of two quadratic monomials when it has degree 3.
fn lcm3(u: &[usize; 2], w: &[usize; 2]) -> Option<[usize; 3]> {
    let mut rest = w.to_vec();
    let mut l = u.to_vec();
    let mut shared = 0;
    for x in u {
        if let Some(pos) = rest.iter().position(|y| y == x) {
            rest.remove(pos);
            shared += 1;
        }
    }
    if shared != 1 {
        return None;
    }
    l.extend(rest);
    l.sort_unstable();
    Some([l[0], l[1], l[2]])
}

/// `(m / lead) · tail` for a quadratic `lead` dividing the cubic `m`.
fn substitute(m: &[usize; 3], lead: &[usize; 2], tail: &[usize; 2]) -> [usize; 3] {
    let mut rest = m.to_vec();
    for x in lead {
        let pos = rest.iter().position(|y| y == x).expect("lead divides m");
        rest.remove(pos);
    }
    let mut out = [rest[0], tail[0], tail[1]];
    out.sort_unstable();
    out
}

fn normal_form(mut m: [usize; 3], table: &Degree2Table, g3: &BTreeMap<[usize; 3], [usize; 3]>) -> [usize; 3] {
    'outer: loop {
        for (a, b, c) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
            if !table.is_standard(m[a], m[b]) {
                let s = table.standard(m[a], m[b]);
                m = [s[0], s[1], m[c]];
                m.sort_unstable();
                continue 'outer;
            }
        }
        match g3.get(&m) {
            Some(t) => m = *t,
            None => return m,
        }
    }
}

/// Outcome of comparing the ideal of quadrics with `K[P]` through degree 3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degree3Check<Z: Int> {
    /// Hilbert function of `A / in(J)` in degrees `0..=3`.
    pub ideal: TruncatedHVector,
    /// Its numerator prefix over `(1 - t)^(d+1)`.
    pub ideal_numerator: Vec<Z>,
    /// The h*-vector of `P` padded or truncated to degrees `0..=3`.
    pub ehrhart_numerator: Vec<Z>,
    /// A height-3 multidegree in which `J` and `I(P)` differ.
    pub offending: Option<Vector<Z>>,
}

impl<Z: Int> Degree3Check<Z> {
    pub fn needs_generators(&self) -> bool {
        self.offending.is_some()
    }
}

/// Decides whether `I(P)` has minimal generators in degree 3 by comparing
/// the truncated h-vector of the quadrics with the Ehrhart h*-vector.
pub fn needs_degree3_generators<Z: Int>(p: &Polytope<Z>) -> Result<Degree3Check<Z>> {
    if !p.spans_lattice() || !p.is_normal() {
        return Err(Error::RequiresNormality);
    }
    degree3_check_unchecked(p)
}

/// [`needs_degree3_generators`] without the normality test, for callers
/// that already know `P` is normal (for instance dilations `cP`, `c >= d - 1`).
pub fn degree3_check_unchecked<Z: Int>(p: &Polytope<Z>) -> Result<Degree3Check<Z>> {
    let points = p.lattice_points();
    let table = Degree2Table::new(points);
    let mut classes = Degree3Classes::new(&table)?;
    let roots = classes.roots();
    let ideal = TruncatedHVector {
        h0: 1,
        h1: table.n as u64,
        h2: table.members.len() as u64,
        h3: roots.len() as u64,
    };
    let d = p.dim();
    let ideal_numerator = ideal.numerator::<Z>(d);
    let mut ehrhart_numerator = p.ehrhart().hstar;
    ehrhart_numerator.resize(4, Z::zero());

    let mut seen: HashSet<Vector<Z>> = HashSet::new();
    let mut offending: Option<Vector<Z>> = None;
    for &r in &roots {
        let s = sum3(points, &classes.monomials[r as usize]);
        if !seen.insert(s.clone()) {
            offending = Some(match offending {
                Some(o) if o < s => o,
                _ => s,
            });
        }
    }
    if (ideal_numerator != ehrhart_numerator) != offending.is_some() {
        return Err(Error::Invariant(format!(
            "h-vector comparison ({ideal_numerator:?} vs {ehrhart_numerator:?}) disagrees with the fiber scan"
        )));
    }
    Ok(Degree3Check {
        ideal,
        ideal_numerator,
        ehrhart_numerator,
        offending,
    })
}

/// The graph of lattice points dividing a height-3 element `c` of `M(P)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorComplex<Z> {
    pub multidegree: Vector<Z>,
    /// Lattice points `p` with `c - p` a sum of two lattice points, sorted.
    pub vertices: Vec<Vector<Z>>,
    /// Pairs `p != q` (indices into `vertices`) with `c - p - q` a lattice point.
    pub edges: Vec<(usize, usize)>,
    /// Connected components as sorted index lists, ordered by first index.
    pub components: Vec<Vec<usize>>,
}

impl<Z: Int> DivisorComplex<Z> {
    pub fn is_connected(&self) -> bool {
        self.components.len() <= 1
    }

    /// Components as point lists.
    pub fn component_points(&self) -> Vec<Vec<Vector<Z>>> {
        self.components
            .iter()
            .map(|c| c.iter().map(|&i| self.vertices[i].clone()).collect())
            .collect()
    }
}

/// Squarefree divisor complex of `c` in total degree 3.
pub fn squarefree_divisor_complex<Z: Int>(p: &Polytope<Z>, c: &Vector<Z>) -> Result<DivisorComplex<Z>> {
    let points = p.lattice_points();
    let pair_sums = pair_sum_set(points);
    divisor_complex_with(points, &pair_sums, c)
}

fn pair_sum_set<Z: Int>(points: &[Vector<Z>]) -> HashSet<Vector<Z>> {
    let mut out = HashSet::new();
    for (i, a) in points.iter().enumerate() {
        for b in &points[i..] {
            out.insert(a + b);
        }
    }
    out
}

fn divisor_complex_with<Z: Int>(
    points: &[Vector<Z>],
    pair_sums: &HashSet<Vector<Z>>,
    c: &Vector<Z>,
) -> Result<DivisorComplex<Z>> {
    let vertices: Vec<Vector<Z>> = points
        .iter()
        .filter(|x| pair_sums.contains(&(c - *x)))
        .cloned()
        .collect();
    if vertices.is_empty() {
        return Err(Error::NotHeightThree(c.to_string()));
    }
    let mut edges = Vec::new();
    let mut uf = UnionFind::new(vertices.len());
    for a in 0..vertices.len() {
        for b in a + 1..vertices.len() {
            let rest = &(c - &vertices[a]) - &vertices[b];
            if points.binary_search(&rest).is_ok() {
                edges.push((a, b));
                uf.union(a as u32, b as u32);
            }
        }
    }
    let mut groups: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for a in 0..vertices.len() {
        groups.entry(uf.find(a as u32)).or_default().push(a);
    }
    Ok(DivisorComplex {
        multidegree: c.clone(),
        vertices,
        edges,
        components: groups.into_values().collect(),
    })
}

/// Samples `trials` sums of three uniformly chosen lattice points and returns
/// the distinct ones whose divisor complex is disconnected, sorted.
pub fn random_degree3_probe<Z: Int>(p: &Polytope<Z>, seed: u64, trials: usize) -> Vec<Vector<Z>> {
    let points = p.lattice_points();
    let pair_sums = pair_sum_set(points);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = std::collections::BTreeSet::new();
    let mut tried = HashSet::new();
    for _ in 0..trials {
        let c = (0..3).fold(Vector::zero(p.dim()), |acc, _| {
            &acc + &points[rng.gen_range(0..points.len())]
        });
        if !tried.insert(c.clone()) {
            continue;
        }
        let cx = divisor_complex_with(points, &pair_sums, &c).expect("sum of three lattice points");
        if !cx.is_connected() {
            found.insert(c);
        }
    }
    found.into_iter().collect()
}
