//! Support polytopes of complete simplicial fans.
//!
//! A right-hand side `b ∈ Z^s` defines `P(b) = {x : ρ_i(x) >= -b_i}`. For a
//! maximal cone `Σ` the candidate vertex `v_Σ(b)` solves `ρ_i(v) = -b_i` for
//! the rays of `Σ`; it is integral exactly for `b` in the Cartier lattice.
//! Strict convexity across every pair of neighbouring cones carves out a cone
//! of right-hand sides whose height-one Hilbert basis elements give the
//! candidate polytopes.

use std::collections::HashMap;
use std::str::FromStr;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use super::{fan_equals, Fan};
use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::lattice::{self, Matrix, Vector};
use crate::polytope::{Facet, Polytope};
use crate::scalar::Int;

/// Which elements of the right-hand-side cone are turned into polytopes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportMode {
    /// Height-one Hilbert basis elements: finds every inclusion-minimal
    /// support polytope.
    HilbertBasis,
    /// Height-one extreme rays only: cheaper, without a minimality guarantee.
    ExtremeRays,
}

impl FromStr for SupportMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hilbert_basis" | "hilbert" => Ok(SupportMode::HilbertBasis),
            "extreme_rays" | "extreme" => Ok(SupportMode::ExtremeRays),
            other => Err(Error::Invalid(format!("unknown support mode `{other}`"))),
        }
    }
}

/// Outcome of the support polytope search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Projectivity {
    /// At least one support polytope was found.
    Projective,
    /// The cone of right-hand sides has no point at positive height.
    NonProjective,
    /// Points at positive height exist but the chosen mode produced none.
    NoRepresentativeInMode,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportPolytope<Z> {
    /// Right-hand sides indexed by the rays of the fan.
    pub b: Vector<Z>,
    pub polytope: Polytope<Z>,
}

impl<Z: Int> SupportPolytope<Z> {
    /// The vertex `v_Σ` of maximal cone `c`.
    pub fn vertex_of(&self, fan: &Fan<Z>, c: usize) -> Option<Vector<Z>> {
        cone_vertex(fan, c, &self.b)
    }
}

#[derive(Clone, Debug)]
pub struct SupportResult<Z> {
    pub mode: SupportMode,
    pub verdict: Projectivity,
    /// Inclusion-minimal support polytopes, each with `v_{Σ0} = 0` for the
    /// first maximal cone.
    pub polytopes: Vec<SupportPolytope<Z>>,
    /// Height-one candidates before verification and minimality filtering.
    pub candidates: usize,
    /// Candidates whose normal fan differed from the input fan.
    pub rejected: usize,
}

/// The solution `v` of `ρ_i(v) = -b_i` over the rays of maximal cone `c`, if
/// it is integral.
pub(crate) fn cone_vertex<Z: Int>(fan: &Fan<Z>, c: usize, b: &Vector<Z>) -> Option<Vector<Z>> {
    let r = Matrix::from_rows(fan.cone_rays(c), fan.dim());
    let rhs: Vec<Ratio<Z>> = fan.cones()[c]
        .iter()
        .map(|&i| Ratio::from_integer(-b[i].clone()))
        .collect();
    let v = r.solve_rational(&rhs)?;
    Vector::from_rational(&v)
}

/// HNF basis of the lattice of right-hand sides `b ∈ Z^s` for which every
/// maximal cone has an integral vertex. All of `Z^s` for unimodular fans.
///
/// Panics if the fan is not simplicial.
pub fn cartier_lattice<Z: Int>(fan: &Fan<Z>) -> Vec<Vector<Z>> {
    assert!(
        fan.is_simplicial(),
        "the Cartier lattice is defined here for simplicial fans"
    );
    let s = fan.rays().len();
    // Congruences c · b ≡ 0 (mod m): rows of adj(R) for each singular cone.
    let mut congruences: Vec<(Vector<Z>, Z)> = Vec::new();
    for c in 0..fan.cones().len() {
        let r = Matrix::from_rows(fan.cone_rays(c), fan.dim());
        let det = r.determinant().abs();
        if det.is_one() {
            continue;
        }
        // v = -R^{-1} b_Σ = -adj(R) b_Σ / det(R)
        let adj = r.adjugate();
        for row in adj.rows() {
            let mut coeffs = Vector::zero(s);
            for (k, &ray) in fan.cones()[c].iter().enumerate() {
                coeffs = &coeffs + &Vector::unit(s, ray).scale(&row[k].mod_floor(&det));
            }
            if !coeffs.is_zero() {
                congruences.push((coeffs, det.clone()));
            }
        }
    }
    if congruences.is_empty() {
        return Matrix::<Z>::identity(s).into_rows();
    }
    // Kernel of [C | -diag(m)], projected to the b coordinates.
    let k = congruences.len();
    let rows: Vec<Vector<Z>> = congruences
        .iter()
        .enumerate()
        .map(|(i, (c, m))| {
            let mut row = c.coords().to_vec();
            row.extend((0..k).map(|j| if i == j { -m.clone() } else { Z::zero() }));
            Vector::new(row)
        })
        .collect();
    let kernel = Matrix::from_rows(rows, s + k).integer_kernel();
    let projected: Vec<Vector<Z>> = kernel.iter().map(|v| Vector::new(v.coords()[..s].to_vec())).collect();
    lattice::lattice_basis(&projected, s)
}

/// Pairs `(Σ, j)`: ray `j` is the apex of a maximal cone sharing a facet with
/// `Σ` and is not a ray of `Σ`.
fn neighbour_pairs<Z: Int>(fan: &Fan<Z>) -> Vec<(usize, usize)> {
    let mut by_facet: HashMap<Vec<usize>, Vec<(usize, usize)>> = HashMap::new();
    for (c, rays) in fan.cones().iter().enumerate() {
        for (skip, &apex) in rays.iter().enumerate() {
            let facet: Vec<usize> = rays
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &r)| r)
                .collect();
            by_facet.entry(facet).or_default().push((c, apex));
        }
    }
    let mut pairs = Vec::new();
    for sharing in by_facet.values() {
        for &(c, _) in sharing {
            for &(t, apex) in sharing {
                if t != c {
                    pairs.push((c, apex));
                }
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}

/// The linear form `b ↦ D (ρ_j(v_Σ(b)) + b_j)` on `Z^s` with `D > 0` clearing
/// denominators, together with `D`.
fn convexity_form<Z: Int>(fan: &Fan<Z>, c: usize, j: usize) -> (Vector<Z>, Z) {
    let s = fan.rays().len();
    let r = Matrix::from_rows(fan.cone_rays(c), fan.dim());
    // ρ_j = Σ w_i ρ_{σ_i}, so ρ_j(v_Σ) = -Σ w_i b_{σ_i}.
    let rho_j: Vec<Ratio<Z>> = fan.rays()[j].to_rational();
    let w = r.transpose().solve_rational(&rho_j).expect("simplicial cone");
    let denom = w.iter().fold(Z::one(), |acc, q| acc.lcm(q.denom()));
    let mut form = Vector::unit(s, j).scale(&denom);
    for (k, &ray) in fan.cones()[c].iter().enumerate() {
        let coeff = (w[k].clone() * Ratio::from_integer(denom.clone())).to_integer();
        form = &form - &Vector::unit(s, ray).scale(&coeff);
    }
    (form, denom)
}

/// Inclusion-minimal lattice polytopes with normal fan `fan`.
///
/// `max_candidates` caps the Hilbert basis enumeration; exceeding it yields
/// [`Error::LimitsExceeded`].
pub fn support_polytopes<Z: Int>(fan: &Fan<Z>, mode: SupportMode, max_candidates: &Z) -> Result<SupportResult<Z>> {
    if !fan.is_simplicial() || !fan.is_complete() {
        return Err(Error::Invalid(
            "support polytopes need a complete simplicial fan".into(),
        ));
    }
    let s = fan.rays().len();
    let sigma0 = &fan.cones()[0];

    // Right-hand sides in the Cartier lattice vanishing on the pinned cone.
    let cart = cartier_lattice(fan);
    let pinned_cols: Vec<Vector<Z>> = cart
        .iter()
        .map(|b| Vector::new(sigma0.iter().map(|&i| b[i].clone()).collect()))
        .collect();
    let combos = Matrix::from_rows(pinned_cols, sigma0.len())
        .transpose()
        .integer_kernel();
    let cart_matrix = Matrix::from_rows(cart, s);
    let basis0: Vec<Vector<Z>> = lattice::lattice_basis(
        &combos.iter().map(|y| cart_matrix.left_mul_vec(y)).collect::<Vec<_>>(),
        s,
    );
    let r = basis0.len();

    // Inequalities of the homogenized cone in coordinates (y, h), b = y · basis0.
    let mut ineqs: Vec<Vector<Z>> = neighbour_pairs(fan)
        .into_iter()
        .map(|(c, j)| {
            let (form, denom) = convexity_form(fan, c, j);
            let mut coords: Vec<Z> = basis0.iter().map(|b| form.dot(b)).collect();
            coords.push(-denom);
            Vector::new(coords)
        })
        .collect();
    ineqs.push(Vector::unit(r + 1, r));
    ineqs.sort();
    ineqs.dedup();

    let rhs_cone = match Cone::from_inequalities(&ineqs, r + 1) {
        Ok(c) => c,
        Err(Error::NotPointed { witness }) => {
            return Err(Error::Invariant(format!(
                "cone of right-hand sides contains the line {witness}"
            )))
        }
        Err(e) => return Err(e),
    };
    if rhs_cone.extreme_rays().iter().all(|v| v.last().is_zero()) {
        return Ok(SupportResult {
            mode,
            verdict: Projectivity::NonProjective,
            polytopes: Vec::new(),
            candidates: 0,
            rejected: 0,
        });
    }
    let elements: Vec<Vector<Z>> = match mode {
        SupportMode::HilbertBasis => rhs_cone.hilbert_basis_capped(max_candidates)?,
        SupportMode::ExtremeRays => rhs_cone.extreme_rays().to_vec(),
    };
    let candidates: Vec<Vector<Z>> = elements
        .into_iter()
        .filter(|e| e.last().is_one())
        .map(|e| {
            let y = e.truncated();
            Matrix::from_rows(basis0.clone(), s).left_mul_vec(&y)
        })
        .collect();
    let n_candidates = candidates.len();

    let verified: Vec<Option<SupportPolytope<Z>>> = candidates
        .par_iter()
        .map(|b| {
            let facets: Vec<Facet<Z>> = fan
                .rays()
                .iter()
                .zip(b.coords())
                .map(|(rho, bi)| Facet {
                    normal: rho.clone(),
                    offset: bi.clone(),
                })
                .collect();
            let p = Polytope::from_inequalities(fan.dim(), &facets).ok()?;
            fan_equals(&p.normal_fan(), fan).then(|| SupportPolytope {
                b: b.clone(),
                polytope: p,
            })
        })
        .collect();
    let rejected = verified.iter().filter(|v| v.is_none()).count();
    let mut found: Vec<SupportPolytope<Z>> = verified.into_iter().flatten().collect();
    found.sort_by(|a, b| a.b.cmp(&b.b));
    found.dedup_by(|a, b| a.polytope == b.polytope);

    let minimal: Vec<SupportPolytope<Z>> = found
        .iter()
        .filter(|p| {
            !found
                .iter()
                .any(|q| q.polytope != p.polytope && q.polytope.is_subset_of(&p.polytope))
        })
        .cloned()
        .collect();
    let verdict = if minimal.is_empty() {
        Projectivity::NoRepresentativeInMode
    } else {
        Projectivity::Projective
    };
    Ok(SupportResult {
        mode,
        verdict,
        polytopes: minimal,
        candidates: n_candidates,
        rejected,
    })
}
