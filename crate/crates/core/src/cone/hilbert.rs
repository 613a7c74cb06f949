//! Hilbert bases through fundamental parallelepipeds of a triangulation.

use rayon::prelude::*;

use super::{triangulate, SimplicialCone};
use crate::error::{Error, Result};
use crate::lattice::{Matrix, Vector};
use crate::scalar::Int;

/// Nonzero lattice points `Σ λ_i g_i` with `0 <= λ_i < 1` for linearly
/// independent `gens` spanning `Z^k`.
pub(crate) fn parallelepiped_points<Z: Int>(gens: &[Vector<Z>]) -> Vec<Vector<Z>> {
    let k = gens.len();
    let g = Matrix::from_rows(gens.to_vec(), k);
    let det = g.determinant();
    assert!(!det.is_zero(), "parallelepiped of dependent vectors");
    if det.abs().is_one() {
        return Vec::new();
    }
    let (h, _) = g.hermite_normal_form();
    // Lower-triangular HNF: the box Π [0, h_ii) is a residue system of Z^k / L.
    let diag: Vec<Z> = (0..k).map(|i| h.get(i, i).clone()).collect();
    let adj = g.adjugate();
    let mut out = Vec::new();
    let mut r = vec![Z::zero(); k];
    loop {
        let rv = Vector::new(r.clone());
        if !rv.is_zero() {
            // q = r G^{-1} = r adj / det; p = r - Σ floor(q_i) g_i
            let num = adj.left_mul_vec(&rv);
            let mut p = rv.clone();
            for (qi, gi) in num.coords().iter().zip(gens) {
                let f = qi.div_floor(&det);
                if !f.is_zero() {
                    p = &p - &gi.scale(&f);
                }
            }
            out.push(p);
        }
        // advance the mixed-radix counter
        let mut i = 0;
        loop {
            if i == k {
                return out;
            }
            r[i] = r[i].clone() + Z::one();
            if r[i] < diag[i] {
                break;
            }
            r[i] = Z::zero();
            i += 1;
        }
    }
}

/// Hilbert basis of the full-dimensional pointed cone in `Z^k` generated by
/// `gens` with inward facet normals `facets`. Output is sorted.
///
/// With a `cap`, fails before enumeration when the triangulation's total
/// multiplicity (the number of parallelepiped points) exceeds it.
pub(crate) fn hilbert_basis_full<Z: Int>(
    gens: &[Vector<Z>],
    facets: &[Vector<Z>],
    cap: Option<&Z>,
) -> Result<Vec<Vector<Z>>> {
    let k = gens[0].dim();
    let max_simplices = cap.map_or(usize::MAX, |c| c.to_usize().unwrap_or(usize::MAX));
    let simplices = triangulate::placing_capped(gens, max_simplices)
        .ok_or_else(|| Error::LimitsExceeded(format!("triangulation needs more than {max_simplices} simplices")))?;
    if let Some(cap) = cap {
        let total = simplices.iter().fold(Z::zero(), |acc, s| {
            let sg: Vec<Vector<Z>> = s.iter().map(|&i| gens[i].clone()).collect();
            acc + Matrix::from_rows(sg, k).determinant().abs()
        });
        if total > *cap {
            return Err(Error::LimitsExceeded(format!(
                "Hilbert basis needs {total} parallelepiped points, cap is {cap}"
            )));
        }
    }
    let mut candidates: Vec<Vector<Z>> = simplices
        .par_iter()
        .flat_map_iter(|s| {
            let sg: Vec<Vector<Z>> = s.iter().map(|&i| gens[i].clone()).collect();
            parallelepiped_points(&sg)
        })
        .collect();
    candidates.extend(gens.iter().cloned());
    candidates.sort();
    candidates.dedup();

    let omega = facets.iter().fold(Vector::zero(k), |acc, f| &acc + f);
    let mut graded: Vec<(Z, Vector<Z>)> = candidates.into_iter().map(|c| (omega.dot(&c), c)).collect();
    graded.sort();

    let in_cone = |x: &Vector<Z>| facets.iter().all(|f| !f.dot(x).is_negative());
    let mut kept: Vec<(Z, Vector<Z>)> = Vec::new();
    for (deg, x) in graded {
        let reducible = kept
            .iter()
            .take_while(|(dy, _)| *dy < deg)
            .any(|(_, y)| in_cone(&(&x - y)));
        if !reducible {
            kept.push((deg, x));
        }
    }
    let mut out: Vec<Vector<Z>> = kept.into_iter().map(|(_, v)| v).collect();
    out.sort();
    Ok(out)
}

/// Hilbert basis of a simplicial cone, sorted.
pub fn hilbert_basis_of_simplicial<Z: Int>(sc: &SimplicialCone<Z>) -> Vec<Vector<Z>> {
    sc.to_cone().hilbert_basis()
}
