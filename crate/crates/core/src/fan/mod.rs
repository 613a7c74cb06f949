//! Complete fans: random generation, desingularization and support
//! polytopes.

mod desingularize;
mod io;
mod random;
mod support;

pub use desingularize::{desingularize, FanLimits};
pub use io::{format_fan, parse_fan};
pub use random::{random_complete_fan, RandomFanConfig};
pub use support::{cartier_lattice, support_polytopes, Projectivity, SupportMode, SupportPolytope, SupportResult};

use std::collections::HashMap;

use num_traits::Signed;

use crate::cone::{span_coefficients, Cone};
use crate::lattice::{self, Matrix, Vector};
use crate::scalar::Int;

/// A fan given by primitive rays and maximal cones as sorted ray-index sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan<Z> {
    dim: usize,
    rays: Vec<Vector<Z>>,
    cones: Vec<Vec<usize>>,
}

impl<Z: Int> Fan<Z> {
    /// Panics on a ray index out of range or a ray of the wrong dimension.
    pub fn new(dim: usize, rays: Vec<Vector<Z>>, cones: Vec<Vec<usize>>) -> Self {
        assert!(rays.iter().all(|r| r.dim() == dim), "ray dimension mismatch");
        let cones = cones
            .into_iter()
            .map(|mut c| {
                assert!(c.iter().all(|&i| i < rays.len()), "ray index out of range");
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        Fan { dim, rays, cones }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vector<Z>] {
        &self.rays
    }

    /// Maximal cones as sorted ray-index sets.
    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn cone_rays(&self, c: usize) -> Vec<Vector<Z>> {
        self.cones[c].iter().map(|&i| self.rays[i].clone()).collect()
    }

    /// Every maximal cone is spanned by `d` linearly independent rays.
    pub fn is_simplicial(&self) -> bool {
        (0..self.cones.len()).all(|c| {
            self.cones[c].len() == self.dim && Matrix::from_rows(self.cone_rays(c), self.dim).rank() == self.dim
        })
    }

    /// Lattice index of the rays of maximal cone `c` (simplicial cones only).
    pub fn multiplicity(&self, c: usize) -> Z {
        lattice::lattice_index(&self.cone_rays(c))
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_simplicial() && (0..self.cones.len()).all(|c| self.multiplicity(c).is_one())
    }

    /// Facet pairing test: every facet of every maximal cone is shared by
    /// exactly one other maximal cone lying on the opposite side of it.
    pub fn is_complete(&self) -> bool {
        if self.cones.is_empty() {
            return false;
        }
        // facet ray set -> (normal of its hyperplane, sides seen)
        let mut facets: HashMap<Vec<usize>, (Vector<Z>, Vec<i8>)> = HashMap::new();
        for c in 0..self.cones.len() {
            let Ok(cone) = Cone::from_generators_in(self.dim, self.cone_rays(c)) else {
                return false;
            };
            if !cone.is_full_dimensional() {
                return false;
            }
            for f in cone.support_hyperplanes() {
                let on: Vec<usize> = self.cones[c]
                    .iter()
                    .copied()
                    .filter(|&i| f.dot(&self.rays[i]).is_zero())
                    .collect();
                let entry = facets.entry(on).or_insert_with(|| (f.clone(), Vec::new()));
                let side = if entry.0 == *f {
                    1
                } else if entry.0 == -f {
                    -1
                } else {
                    return false;
                };
                entry.1.push(side);
            }
        }
        facets.values().all(|(_, sides)| {
            let mut s = sides.clone();
            s.sort_unstable();
            s == [-1, 1]
        })
    }

    /// Index of the first maximal cone containing `u`.
    pub fn cone_containing(&self, u: &Vector<Z>) -> Option<usize> {
        (0..self.cones.len()).find(|&c| cone_contains(&self.cone_rays(c), u))
    }

    /// Maximal cones as sets of ray vectors, sorted; the canonical form used
    /// by [`fan_equals`].
    pub fn canonical_cones(&self) -> Vec<Vec<Vector<Z>>> {
        let mut out: Vec<Vec<Vector<Z>>> = (0..self.cones.len())
            .map(|c| {
                let mut rs = self.cone_rays(c);
                rs.sort();
                rs
            })
            .collect();
        out.sort();
        out
    }

    /// Inserts `ray` by stellar subdivision of every maximal cone containing
    /// it. Returns the index of the ray, which is reused if already present.
    pub(crate) fn stellar_insert(&mut self, ray: &Vector<Z>) -> Option<usize> {
        let ray = ray.primitive().ok()?;
        if let Some(i) = self.rays.iter().position(|r| *r == ray) {
            return Some(i);
        }
        let idx = self.rays.len();
        let mut out = Vec::with_capacity(self.cones.len() + self.dim);
        let mut hit = false;
        for c in &self.cones {
            let gens: Vec<Vector<Z>> = c.iter().map(|&i| self.rays[i].clone()).collect();
            match span_coefficients(&gens, &ray) {
                Some(coef) if coef.iter().all(|q| !q.is_negative()) => {
                    hit = true;
                    for (k, q) in coef.iter().enumerate() {
                        if q.is_positive() {
                            let mut nc = c.clone();
                            nc[k] = idx;
                            nc.sort_unstable();
                            out.push(nc);
                        }
                    }
                }
                _ => out.push(c.clone()),
            }
        }
        if !hit {
            return None;
        }
        self.rays.push(ray);
        self.cones = out;
        Some(idx)
    }
}

fn cone_contains<Z: Int>(gens: &[Vector<Z>], u: &Vector<Z>) -> bool {
    match Cone::from_generators_in(u.dim(), gens.to_vec()) {
        Ok(c) => c.contains(u),
        Err(_) => false,
    }
}

/// Equality as sets of cones, rays matched as vectors.
pub fn fan_equals<Z: Int>(f1: &Fan<Z>, f2: &Fan<Z>) -> bool {
    f1.dim == f2.dim && f1.canonical_cones() == f2.canonical_cones()
}
