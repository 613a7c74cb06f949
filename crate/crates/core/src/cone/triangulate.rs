//! Placing triangulation of a full-dimensional cone.

use std::collections::HashMap;

use crate::lattice::{Matrix, Vector};
use crate::scalar::Int;

/// Triangulates the full-dimensional cone generated by `gens` (in `Z^k`,
/// `k = gens[0].dim()`), placing generators in input order. Returns index sets
/// of the maximal simplicial cones, each sorted.
pub(crate) fn placing<Z: Int>(gens: &[Vector<Z>]) -> Vec<Vec<usize>> {
    placing_capped(gens, usize::MAX).expect("uncapped")
}

/// [`placing`], giving up (`None`) once more than `max_simplices` simplices exist.
pub(crate) fn placing_capped<Z: Int>(gens: &[Vector<Z>], max_simplices: usize) -> Option<Vec<Vec<usize>>> {
    let Some(k) = gens.first().map(Vector::dim) else {
        return Some(Vec::new());
    };
    let mut start: Vec<usize> = Vec::with_capacity(k);
    for i in 0..gens.len() {
        let mut trial: Vec<Vector<Z>> = start.iter().map(|&j| gens[j].clone()).collect();
        trial.push(gens[i].clone());
        if Matrix::from_rows(trial, k).rank() == start.len() + 1 {
            start.push(i);
            if start.len() == k {
                break;
            }
        }
    }
    assert_eq!(start.len(), k, "placing triangulation needs a full-dimensional cone");

    let mut simplices: Vec<Vec<usize>> = vec![start.clone()];
    // Boundary facet -> its normal, positive on the simplex it bounds.
    let mut boundary: HashMap<Vec<usize>, Vector<Z>> = HashMap::new();
    let mut start_sorted = start.clone();
    start_sorted.sort_unstable();
    for (f, nu) in facets_of(&start_sorted)
        .into_iter()
        .zip(facet_normals(gens, &start_sorted, k))
    {
        boundary.insert(f, nu);
    }
    for g in 0..gens.len() {
        if start.contains(&g) {
            continue;
        }
        let mut visible: Vec<Vec<usize>> = boundary
            .iter()
            .filter(|(_, nu)| nu.dot(&gens[g]).is_negative())
            .map(|(f, _)| f.clone())
            .collect();
        visible.sort();
        for f in visible {
            boundary.remove(&f);
            let mut s = f.clone();
            s.push(g);
            s.sort_unstable();
            let normals = facet_normals(gens, &s, k);
            for (sub, nu) in facets_of(&s).into_iter().zip(normals) {
                if sub == f {
                    continue;
                }
                // A facet shared with an earlier new simplex becomes interior.
                if boundary.remove(&sub).is_none() {
                    boundary.insert(sub, nu);
                }
            }
            simplices.push(s);
            if simplices.len() > max_simplices {
                return None;
            }
        }
    }
    for s in &mut simplices {
        s.sort_unstable();
    }
    Some(simplices)
}

fn facets_of(s: &[usize]) -> Vec<Vec<usize>> {
    (0..s.len())
        .map(|skip| {
            s.iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &x)| x)
                .collect()
        })
        .collect()
}

/// Inward facet normals of the simplicial cone on `gens[s]`, in the order of
/// [`facets_of`]: the `j`-th drops `s[j]` and is positive on it.
fn facet_normals<Z: Int>(gens: &[Vector<Z>], s: &[usize], k: usize) -> Vec<Vector<Z>> {
    let m = Matrix::from_rows(s.iter().map(|&i| gens[i].clone()).collect(), k);
    let adj = m.adjugate().transpose();
    let det_negative = m.row(0).dot(adj.row(0)).is_negative();
    adj.into_rows()
        .into_iter()
        .map(|col| {
            let nu = col
                .primitive()
                .expect("adjugate of a nonsingular matrix has no zero column");
            if det_negative {
                -&nu
            } else {
                nu
            }
        })
        .collect()
}
