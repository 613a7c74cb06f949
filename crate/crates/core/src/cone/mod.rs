//! Pointed rational cones: duality, triangulation, multiplicities, Hilbert
//! bases and stellar subdivision.
//!
//! A [`Cone`] may be lower-dimensional. Internally every computation happens
//! in coordinates with respect to a lattice basis of `span(C) ∩ Z^n`, where the
//! cone is full-dimensional; results are mapped back to the ambient lattice.

mod dd;
mod hilbert;
mod triangulate;

pub(crate) use dd::extreme_rays as extreme_rays_of;
pub use hilbert::hilbert_basis_of_simplicial;

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{self, Matrix, Vector};
use crate::scalar::Int;

/// A pointed rational polyhedral cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone<Z> {
    ambient: usize,
    /// Primitive generators in input order, duplicates and zeros removed.
    generators: Vec<Vector<Z>>,
    extreme_rays: Vec<Vector<Z>>,
    /// Inward facet normals, primitive. For lower-dimensional cones these are
    /// some integral lifts; together with `equations` they cut out the cone.
    support_hyperplanes: Vec<Vector<Z>>,
    /// Basis of `span(C)^⊥ ∩ Z^n`.
    equations: Vec<Vector<Z>>,
    frame: Frame<Z>,
}

/// Coordinates in a lattice basis of the linear span.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Frame<Z> {
    /// `None` when the cone is full-dimensional.
    basis: Option<Matrix<Z>>,
    gens: Vec<Vector<Z>>,
    facets: Vec<Vector<Z>>,
}

impl<Z: Int> Frame<Z> {
    fn to_ambient(&self, c: &Vector<Z>) -> Vector<Z> {
        match &self.basis {
            None => c.clone(),
            Some(b) => b.left_mul_vec(c),
        }
    }

    fn dim(&self) -> usize {
        match &self.basis {
            None => self.gens.first().map_or(0, Vector::dim),
            Some(b) => b.nrows(),
        }
    }
}

/// A simplicial cone together with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplicialCone<Z> {
    generators: Vec<Vector<Z>>,
    multiplicity: Z,
}

impl<Z: Int> SimplicialCone<Z> {
    /// Panics if the generators are linearly dependent.
    pub fn new(generators: Vec<Vector<Z>>) -> Self {
        let generators: Vec<Vector<Z>> = generators
            .into_iter()
            .map(|g| g.primitive().expect("simplicial cone generators are nonzero"))
            .collect();
        let multiplicity = lattice::lattice_index(&generators);
        assert!(
            !multiplicity.is_zero(),
            "simplicial cone generators must be linearly independent"
        );
        SimplicialCone {
            generators,
            multiplicity,
        }
    }

    pub fn generators(&self) -> &[Vector<Z>] {
        &self.generators
    }

    pub fn multiplicity(&self) -> &Z {
        &self.multiplicity
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    /// Coefficients of `v` in the generators, if `v` lies in their span.
    pub fn coefficients(&self, v: &Vector<Z>) -> Option<Vec<Ratio<Z>>> {
        span_coefficients(&self.generators, v)
    }

    /// True iff `v` lies in the (closed) cone.
    pub fn contains(&self, v: &Vector<Z>) -> bool {
        self.coefficients(v).is_some_and(|c| c.iter().all(|q| !q.is_negative()))
    }

    pub fn to_cone(&self) -> Cone<Z> {
        Cone::from_generators(self.generators.clone()).expect("simplicial cones are pointed")
    }
}

/// Multiplicity of a simplicial cone: the index of its generators in the
/// lattice of their span.
pub fn multiplicity<Z: Int>(sc: &SimplicialCone<Z>) -> Z {
    sc.multiplicity.clone()
}

/// Rational coefficients of `v` in the independent vectors `gens`.
pub(crate) fn span_coefficients<Z: Int>(gens: &[Vector<Z>], v: &Vector<Z>) -> Option<Vec<Ratio<Z>>> {
    let k = gens.len();
    let n = v.dim();
    if k == 0 {
        return v.is_zero().then(Vec::new);
    }
    // Pick k coordinates on which the generators are independent.
    let gt = Matrix::from_rows(gens.to_vec(), n).transpose();
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    for i in 0..n {
        let mut trial = chosen.clone();
        trial.push(i);
        if gt.select_rows(&trial).rank() == trial.len() {
            chosen = trial;
            if chosen.len() == k {
                break;
            }
        }
    }
    if chosen.len() < k {
        return None;
    }
    let sq = gt.select_rows(&chosen);
    let rhs: Vec<Ratio<Z>> = chosen.iter().map(|&i| Ratio::from_integer(v[i].clone())).collect();
    let sol = sq.solve_rational(&rhs)?;
    // Verify the remaining coordinates.
    for i in 0..n {
        let lhs = gens.iter().zip(&sol).fold(Ratio::zero(), |acc: Ratio<Z>, (g, c)| {
            acc + c.clone() * Ratio::from_integer(g[i].clone())
        });
        if lhs != Ratio::from_integer(v[i].clone()) {
            return None;
        }
    }
    Some(sol)
}

impl<Z: Int> Cone<Z> {
    /// The cone generated by `generators` in `Z^ambient`.
    ///
    /// Fails with [`Error::NotPointed`] when the cone contains a line; the
    /// error carries a generator of such a line.
    pub fn from_generators_in(ambient: usize, generators: Vec<Vector<Z>>) -> Result<Self> {
        let mut gens: Vec<Vector<Z>> = Vec::new();
        for g in generators {
            assert_eq!(g.dim(), ambient, "generator dimension mismatch");
            if g.is_zero() {
                continue;
            }
            let p = g.primitive()?;
            if !gens.contains(&p) {
                gens.push(p);
            }
        }
        if gens.is_empty() {
            return Ok(Cone {
                ambient,
                generators: Vec::new(),
                extreme_rays: Vec::new(),
                support_hyperplanes: Vec::new(),
                equations: Matrix::<Z>::identity(ambient).into_rows(),
                frame: Frame {
                    basis: Some(Matrix::from_rows(Vec::new(), ambient)),
                    gens: Vec::new(),
                    facets: Vec::new(),
                },
            });
        }
        let basis = lattice::saturated_basis(&gens, ambient);
        let k = basis.len();
        let (basis_m, local_gens) = if k == ambient {
            (None, gens.clone())
        } else {
            let bm = Matrix::from_rows(basis, ambient);
            let bt = bm.transpose();
            let local = gens
                .iter()
                .map(|g| bt.solve_integer(g).expect("generator lies in its span"))
                .collect();
            (Some(bm), local)
        };

        let local_facets = dd::extreme_rays(&local_gens, k)?;
        if Matrix::from_rows(local_facets.clone(), k).rank() < k {
            // The dual is lower-dimensional, so the cone has a lineality space.
            let line = Matrix::from_rows(local_facets.clone(), k)
                .integer_kernel()
                .into_iter()
                .next()
                .expect("rank deficiency gives a kernel vector");
            let witness = match &basis_m {
                None => line,
                Some(b) => b.left_mul_vec(&line),
            };
            return Err(Error::NotPointed {
                witness: witness.to_string(),
            });
        }

        let extreme_rays = gens
            .iter()
            .zip(&local_gens)
            .filter(|(_, lg)| {
                let tight: Vec<Vector<Z>> = local_facets.iter().filter(|f| f.dot(lg).is_zero()).cloned().collect();
                k == 1 || (!tight.is_empty() && Matrix::from_rows(tight, k).rank() == k - 1)
            })
            .map(|(g, _)| g.clone())
            .collect();

        let support_hyperplanes = match &basis_m {
            None => local_facets.clone(),
            Some(b) => local_facets
                .iter()
                .map(|f| b.solve_integer(f).expect("saturated basis admits integral lifts"))
                .collect(),
        };
        let equations = if k == ambient {
            Vec::new()
        } else {
            Matrix::from_rows(gens.clone(), ambient).integer_kernel()
        };
        Ok(Cone {
            ambient,
            generators: gens,
            extreme_rays,
            support_hyperplanes,
            equations,
            frame: Frame {
                basis: basis_m,
                gens: local_gens,
                facets: local_facets,
            },
        })
    }

    /// Like [`Cone::from_generators_in`], with the ambient dimension taken
    /// from the first generator. Panics on an empty list.
    pub fn from_generators(generators: Vec<Vector<Z>>) -> Result<Self> {
        let n = generators.first().expect("at least one generator").dim();
        Self::from_generators_in(n, generators)
    }

    /// The cone `{x : λ·x >= 0 for all λ in ineqs}`; must be pointed.
    pub fn from_inequalities(ineqs: &[Vector<Z>], ambient: usize) -> Result<Self> {
        let rays = dd::extreme_rays(ineqs, ambient)?;
        Self::from_generators_in(ambient, rays)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Always true: construction rejects cones containing a line.
    pub fn is_pointed(&self) -> bool {
        true
    }

    pub fn generators(&self) -> &[Vector<Z>] {
        &self.generators
    }

    pub fn extreme_rays(&self) -> &[Vector<Z>] {
        &self.extreme_rays
    }

    pub fn support_hyperplanes(&self) -> &[Vector<Z>] {
        &self.support_hyperplanes
    }

    pub fn equations(&self) -> &[Vector<Z>] {
        &self.equations
    }

    pub fn contains(&self, v: &Vector<Z>) -> bool {
        self.equations.iter().all(|e| e.dot(v).is_zero())
            && self.support_hyperplanes.iter().all(|f| !f.dot(v).is_negative())
    }

    /// A linear form strictly positive on every nonzero element of the cone.
    pub fn grading(&self) -> Vector<Z> {
        let k = self.frame.dim();
        self.frame.facets.iter().fold(Vector::zero(k), |acc, f| &acc + f)
    }

    /// Placing triangulation using the generators in input order.
    pub fn triangulate(&self) -> Vec<SimplicialCone<Z>> {
        triangulate::placing(&self.frame.gens)
            .into_iter()
            .map(|s| {
                let gens: Vec<Vector<Z>> = s.iter().map(|&i| self.generators[i].clone()).collect();
                SimplicialCone::new(gens)
            })
            .collect()
    }

    /// The Hilbert basis of `C ∩ Z^n`, sorted lexicographically.
    pub fn hilbert_basis(&self) -> Vec<Vector<Z>> {
        self.hilbert_basis_inner(None)
            .expect("uncapped computation cannot fail")
    }

    /// Like [`Cone::hilbert_basis`], but fails with
    /// [`Error::LimitsExceeded`] instead of enumerating more than `cap`
    /// candidate points.
    pub fn hilbert_basis_capped(&self, cap: &Z) -> Result<Vec<Vector<Z>>> {
        self.hilbert_basis_inner(Some(cap))
    }

    fn hilbert_basis_inner(&self, cap: Option<&Z>) -> Result<Vec<Vector<Z>>> {
        if self.generators.is_empty() {
            return Ok(Vec::new());
        }
        let local = hilbert::hilbert_basis_full(&self.frame.gens, &self.frame.facets, cap)?;
        let mut out: Vec<Vector<Z>> = local.iter().map(|c| self.frame.to_ambient(c)).collect();
        out.sort();
        Ok(out)
    }

    /// Sum of the multiplicities of the placing triangulation. When all
    /// generators lie at height one for some grading this is the normalized
    /// volume of the cross-section and does not depend on the triangulation.
    pub fn normalized_volume(&self) -> Z {
        self.triangulate()
            .iter()
            .fold(Z::zero(), |acc, s| acc + s.multiplicity.clone())
    }
}

/// Irredundant inward facet normals of the cone generated by `generators`.
pub fn support_hyperplanes<Z: Int>(generators: &[Vector<Z>]) -> Result<Vec<Vector<Z>>> {
    Ok(Cone::from_generators(generators.to_vec())?.support_hyperplanes)
}

pub fn triangulate<Z: Int>(cone: &Cone<Z>) -> Vec<SimplicialCone<Z>> {
    cone.triangulate()
}

pub fn hilbert_basis<Z: Int>(cone: &Cone<Z>) -> Vec<Vector<Z>> {
    cone.hilbert_basis()
}

/// Stellar subdivision of a collection of simplicial cones at `ray`.
///
/// Every cone containing `ray` is replaced by the cones obtained by swapping
/// `ray` in for each generator carrying a positive coefficient; the others are
/// kept. Fails if no cone contains `ray`.
pub fn stellar_subdivide<Z: Int>(cones: &[SimplicialCone<Z>], ray: &Vector<Z>) -> Result<Vec<SimplicialCone<Z>>> {
    let ray = ray.primitive()?;
    let mut out = Vec::with_capacity(cones.len() + 2);
    let mut hit = false;
    for c in cones {
        match c.coefficients(&ray) {
            Some(coef) if coef.iter().all(|q| !q.is_negative()) => {
                hit = true;
                for (i, q) in coef.iter().enumerate() {
                    if q.is_positive() {
                        let mut gens = c.generators.clone();
                        gens[i] = ray.clone();
                        out.push(SimplicialCone::new(gens));
                    }
                }
            }
            _ => out.push(c.clone()),
        }
    }
    if !hit {
        return Err(Error::RayOutsideFan(ray.to_string()));
    }
    Ok(out)
}

/// Hilbert-basis criterion for a full-dimensional cone generated by `d + 1`
/// vectors: for every facet, the generators on it together with one of the
/// remaining generators must generate `Z^d`. A true result certifies that the
/// generators are the Hilbert basis.
///
/// Panics when the generator count is not `d + 1` or the cone is not a
/// full-dimensional pointed cone.
pub fn dplus1_hilbert_criterion<Z: Int>(generators: &[Vector<Z>]) -> bool {
    let d = generators.first().expect("nonempty generator list").dim();
    assert_eq!(generators.len(), d + 1, "criterion needs exactly d + 1 generators");
    let cone = Cone::from_generators(generators.to_vec()).expect("generators span a pointed cone");
    assert!(cone.is_full_dimensional(), "criterion needs a full-dimensional cone");
    cone.support_hyperplanes().iter().all(|facet| {
        let (on, off): (Vec<&Vector<Z>>, Vec<&Vector<Z>>) = generators.iter().partition(|g| facet.dot(g).is_zero());
        off.iter().any(|w| {
            let mut set: Vec<Vector<Z>> = on.iter().map(|g| (*g).clone()).collect();
            set.push((*w).clone());
            lattice::generates_lattice(&set, d)
        })
    })
}
