//! Double description: extreme rays of `{x : a_i·x >= 0}`.

use fixedbitset::FixedBitSet;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{Matrix, Vector};
use crate::scalar::Int;

struct Ray<Z> {
    vec: Vector<Z>,
    zeros: FixedBitSet,
}

/// Extreme rays (primitive, sorted) of the pointed cone cut out by `ineqs`
/// in `Z^n`. A system of rank below `n` describes a cone with a lineality
/// space; the error then carries a vector spanning a contained line.
pub(crate) fn extreme_rays<Z: Int>(ineqs: &[Vector<Z>], n: usize) -> Result<Vec<Vector<Z>>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let m = ineqs.len();
    let all = Matrix::from_rows(ineqs.to_vec(), n);
    if m == 0 || all.rank() < n {
        let kernel = all.integer_kernel();
        let witness = kernel.into_iter().next().unwrap_or_else(|| Vector::unit(n, 0));
        return Err(Error::NotPointed {
            witness: witness.to_string(),
        });
    }

    // Greedy independent rows form the starting simplicial cone.
    let mut basis_rows: Vec<usize> = Vec::with_capacity(n);
    let mut echelon: Vec<Vec<Ratio<Z>>> = Vec::with_capacity(n);
    for (i, row) in ineqs.iter().enumerate() {
        if basis_rows.len() == n {
            break;
        }
        if let Some(reduced) = reduce_against(&echelon, row) {
            echelon.push(reduced);
            basis_rows.push(i);
        }
    }
    let b = all.select_rows(&basis_rows);
    let mut rays: Vec<Ray<Z>> = (0..n)
        .map(|k| {
            let mut e = vec![Ratio::zero(); n];
            e[k] = Ratio::one();
            let col = b.solve_rational(&e).expect("basis rows are independent");
            let v = Vector::clear_denominators(&col)
                .primitive()
                .expect("inverse column is nonzero");
            let mut zeros = FixedBitSet::with_capacity(m);
            for (j, &r) in basis_rows.iter().enumerate() {
                if j != k {
                    zeros.insert(r);
                }
            }
            Ray { vec: v, zeros }
        })
        .collect();

    let in_basis: FixedBitSet = {
        let mut s = FixedBitSet::with_capacity(m);
        basis_rows.iter().for_each(|&r| s.insert(r));
        s
    };
    for i in (0..m).filter(|&i| !in_basis.contains(i)) {
        let a = &ineqs[i];
        let vals: Vec<Z> = rays.iter().map(|r| a.dot(&r.vec)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_negative()).collect();
        if neg.is_empty() {
            for (k, r) in rays.iter_mut().enumerate() {
                if vals[k].is_zero() {
                    r.zeros.insert(i);
                }
            }
            continue;
        }
        let mut fresh = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let mut common = rays[p].zeros.clone();
                common.intersect_with(&rays[q].zeros);
                if common.count_ones(..) + 2 < n {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == p || k == q || !common.is_subset(&r.zeros));
                if !adjacent {
                    continue;
                }
                let v = &rays[q].vec.scale(&vals[p]) - &rays[p].vec.scale(&vals[q]);
                let v = v.primitive().expect("combination of adjacent rays is nonzero");
                common.insert(i);
                fresh.push(Ray { vec: v, zeros: common });
            }
        }
        let mut kept: Vec<Ray<Z>> = Vec::with_capacity(rays.len() + fresh.len());
        for (k, mut r) in rays.into_iter().enumerate() {
            if vals[k].is_negative() {
                continue;
            }
            if vals[k].is_zero() {
                r.zeros.insert(i);
            }
            kept.push(r);
        }
        kept.extend(fresh);
        rays = kept;
    }
    let mut out: Vec<Vector<Z>> = rays.into_iter().map(|r| r.vec).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Gaussian reduction of `row` against an echelon basis; `None` if dependent.
fn reduce_against<Z: Int>(echelon: &[Vec<Ratio<Z>>], row: &Vector<Z>) -> Option<Vec<Ratio<Z>>> {
    let mut r = row.to_rational();
    for e in echelon {
        let p = e.iter().position(|c| !c.is_zero()).expect("echelon rows are nonzero");
        if !r[p].is_zero() {
            let f = r[p].clone() / e[p].clone();
            for (x, y) in r.iter_mut().zip(e) {
                *x = x.clone() - f.clone() * y.clone();
            }
        }
    }
    if r.iter().all(Zero::is_zero) {
        return None;
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type V = Vector<BigInt>;

    #[test]
    fn orthant() {
        let ineqs: Vec<V> = (0..3).map(|i| V::unit(3, i)).collect();
        let rays = extreme_rays(&ineqs, 3).unwrap();
        assert_eq!(rays, vec![V::unit(3, 2), V::unit(3, 1), V::unit(3, 0)]);
    }

    #[test]
    fn square_pyramid_cone() {
        // cone over the square [-1,1]^2 at height 1: x3 ± x1 >= 0, x3 ± x2 >= 0
        let ineqs = vec![
            V::from_i64s(&[1, 0, 1]),
            V::from_i64s(&[-1, 0, 1]),
            V::from_i64s(&[0, 1, 1]),
            V::from_i64s(&[0, -1, 1]),
        ];
        let rays = extreme_rays(&ineqs, 3).unwrap();
        assert_eq!(rays.len(), 4);
        for s in [[-1, -1], [-1, 1], [1, -1], [1, 1]] {
            assert!(rays.contains(&V::from_i64s(&[s[0], s[1], 1])));
        }
    }

    #[test]
    fn lineality_is_reported() {
        let ineqs = vec![V::from_i64s(&[1, 0])];
        assert!(matches!(extreme_rays(&ineqs, 2), Err(Error::NotPointed { .. })));
    }

    #[test]
    fn lower_dimensional_cone() {
        // x >= 0, y >= 0, y <= 0: the ray e1.
        let ineqs = vec![V::from_i64s(&[1, 0]), V::from_i64s(&[0, 1]), V::from_i64s(&[0, -1])];
        assert_eq!(extreme_rays(&ineqs, 2).unwrap(), vec![V::from_i64s(&[1, 0])]);
        // x >= 0, -x >= 0, y >= 0, -y >= 0: the zero cone.
        let ineqs = vec![
            V::from_i64s(&[1, 0]),
            V::from_i64s(&[-1, 0]),
            V::from_i64s(&[0, 1]),
            V::from_i64s(&[0, -1]),
        ];
        assert!(extreme_rays(&ineqs, 2).unwrap().is_empty());
    }
}
