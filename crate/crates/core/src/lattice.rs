//! Integer vectors and matrices with exact normal forms.
//!
//! The Hermite normal form produced here is *row-style and lower triangular*:
//! `U * M = H` with `U` unimodular, each nonzero row of `H` ends in a positive
//! pivot, pivot columns strictly increase from top to bottom, entries below a
//! pivot lie in `[0, pivot)`, and zero rows come last. For a square
//! nonsingular `M` this is the familiar lower-triangular form with reduced
//! off-diagonal residues.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_rational::Ratio;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{floor_div, Int};

/// A vector of the lattice `Z^d` (or of its dual).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector<Z>(Vec<Z>);

impl<Z: Int> Vector<Z> {
    pub fn new(coords: Vec<Z>) -> Self {
        Vector(coords)
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        Vector(coords.iter().map(|&c| crate::scalar::int(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Vector(vec![Z::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = Z::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Z] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Z> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &Self) -> Z {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(Z::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn scale(&self, k: &Z) -> Self {
        Vector(self.0.iter().map(|c| c.clone() * k.clone()).collect())
    }

    /// Exact division; the caller guarantees divisibility.
    pub fn div_exact(&self, k: &Z) -> Self {
        Vector(self.0.iter().map(|c| c.clone() / k.clone()).collect())
    }

    /// Greatest common divisor of the coordinates (zero for the zero vector).
    pub fn content(&self) -> Z {
        self.0.iter().fold(Z::zero(), |g, c| g.gcd(c))
    }

    /// The vector divided by the gcd of its entries.
    pub fn primitive(&self) -> Result<Self> {
        let g = self.content();
        if g.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(self.div_exact(&g))
    }

    /// Lattice length of the segment from the origin: the gcd of the entries.
    pub fn lattice_length(&self) -> Z {
        self.content()
    }

    /// Append a coordinate (homogenization).
    pub fn extended(&self, last: Z) -> Self {
        let mut c = self.0.clone();
        c.push(last);
        Vector(c)
    }

    /// Drop the last coordinate.
    pub fn truncated(&self) -> Self {
        Vector(self.0[..self.0.len() - 1].to_vec())
    }

    pub fn last(&self) -> &Z {
        self.0.last().expect("nonempty vector")
    }

    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.0.iter().map(|c| c.to_i64()).collect()
    }

    pub fn to_rational(&self) -> Vec<Ratio<Z>> {
        self.0.iter().map(|c| Ratio::from_integer(c.clone())).collect()
    }

    /// Integer vector from rationals, if every entry is integral.
    pub fn from_rational(coords: &[Ratio<Z>]) -> Option<Self> {
        coords
            .iter()
            .map(|q| q.is_integer().then(|| q.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(Vector)
    }

    /// Smallest positive multiple of a rational vector that is integral.
    pub fn clear_denominators(coords: &[Ratio<Z>]) -> Self {
        let l = coords.iter().fold(Z::one(), |l, q| l.lcm(q.denom()));
        Vector(
            coords
                .iter()
                .map(|q| q.numer().clone() * (l.clone() / q.denom().clone()))
                .collect(),
        )
    }
}

impl<Z: Int> Index<usize> for Vector<Z> {
    type Output = Z;
    fn index(&self, i: usize) -> &Z {
        &self.0[i]
    }
}

impl<Z: Int> Add for &Vector<Z> {
    type Output = Vector<Z>;
    fn add(self, rhs: &Vector<Z>) -> Vector<Z> {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a.clone() + b.clone()).collect())
    }
}

impl<Z: Int> Sub for &Vector<Z> {
    type Output = Vector<Z>;
    fn sub(self, rhs: &Vector<Z>) -> Vector<Z> {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a.clone() - b.clone()).collect())
    }
}

impl<Z: Int> Neg for &Vector<Z> {
    type Output = Vector<Z>;
    fn neg(self) -> Vector<Z> {
        Vector(self.0.iter().map(|a| -a.clone()).collect())
    }
}

impl<Z: fmt::Display> fmt::Display for Vector<Z> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl<Z: fmt::Debug> fmt::Debug for Vector<Z> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c:?}")?;
        }
        write!(f, ")")
    }
}

/// A rectangular integer matrix stored by rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<Z> {
    rows: Vec<Vector<Z>>,
    ncols: usize,
}

impl<Z: Int> Matrix<Z> {
    /// Panics if the rows have unequal length.
    pub fn from_rows(rows: Vec<Vector<Z>>, ncols: usize) -> Self {
        assert!(
            rows.iter().all(|r| r.dim() == ncols),
            "matrix rows must all have {ncols} columns"
        );
        Matrix { rows, ncols }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(rows.iter().map(|r| Vector::from_i64s(r)).collect(), ncols)
    }

    pub fn identity(n: usize) -> Self {
        Matrix {
            rows: (0..n).map(|i| Vector::unit(n, i)).collect(),
            ncols: n,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vector<Z>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vector<Z>> {
        self.rows
    }

    pub fn row(&self, i: usize) -> &Vector<Z> {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> &Z {
        &self.rows[i].0[j]
    }

    pub fn transpose(&self) -> Self {
        let rows = (0..self.ncols)
            .map(|j| Vector(self.rows.iter().map(|r| r.0[j].clone()).collect()))
            .collect();
        Matrix {
            rows,
            ncols: self.nrows(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows(), "dimension mismatch in product");
        let t = other.transpose();
        let rows = self
            .rows
            .iter()
            .map(|r| Vector(t.rows.iter().map(|c| r.dot(c)).collect()))
            .collect();
        Matrix {
            rows,
            ncols: other.ncols,
        }
    }

    pub fn mul_vec(&self, v: &Vector<Z>) -> Vector<Z> {
        Vector(self.rows.iter().map(|r| r.dot(v)).collect())
    }

    /// Row vector times matrix: `v^T * M`.
    pub fn left_mul_vec(&self, v: &Vector<Z>) -> Vector<Z> {
        assert_eq!(v.dim(), self.nrows());
        let mut acc = Vector::zero(self.ncols);
        for (c, r) in v.0.iter().zip(&self.rows) {
            if !c.is_zero() {
                acc = &acc + &r.scale(c);
            }
        }
        acc
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Matrix {
            rows: idx.iter().map(|&i| self.rows[i].clone()).collect(),
            ncols: self.ncols,
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    ///
    /// Panics on non-square input.
    pub fn determinant(&self) -> Z {
        let n = self.nrows();
        assert_eq!(n, self.ncols, "determinant of a non-square matrix");
        if n == 0 {
            return Z::one();
        }
        let mut a: Vec<Vec<Z>> = self.rows.iter().map(|r| r.0.clone()).collect();
        let mut sign = Z::one();
        let mut prev = Z::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Z::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone();
                    a[i][j] = v / prev.clone();
                }
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }

    /// Rank by fraction-free elimination over the columns.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<Z>> = self.rows.iter().map(|r| r.0.clone()).collect();
        let m = a.len();
        let mut rank = 0;
        let mut prev = Z::one();
        for col in 0..self.ncols {
            if rank == m {
                break;
            }
            let Some(p) = (rank..m).find(|&i| !a[i][col].is_zero()) else {
                continue;
            };
            a.swap(p, rank);
            for i in rank + 1..m {
                for j in col + 1..self.ncols {
                    let v = a[i][j].clone() * a[rank][col].clone() - a[i][col].clone() * a[rank][j].clone();
                    a[i][j] = v / prev.clone();
                }
                a[i][col] = Z::zero();
            }
            prev = a[rank][col].clone();
            rank += 1;
        }
        rank
    }

    /// The adjugate `adj` with `self * adj = det * I`, by fraction-free
    /// Gauss-Jordan elimination on `[A | I]`. Panics on singular or
    /// non-square input.
    pub fn adjugate(&self) -> Self {
        let n = self.nrows();
        assert_eq!(n, self.ncols, "adjugate of a non-square matrix");
        let mut a: Vec<Vec<Z>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.0.clone();
                row.extend((0..n).map(|j| if i == j { Z::one() } else { Z::zero() }));
                row
            })
            .collect();
        let mut swaps_odd = false;
        let mut prev = Z::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                let i = (k + 1..n)
                    .find(|&i| !a[i][k].is_zero())
                    .expect("adjugate of a singular matrix");
                a.swap(i, k);
                swaps_odd = !swaps_odd;
            }
            for i in (0..n).filter(|&i| i != k) {
                for j in (0..2 * n).filter(|&j| j != k) {
                    let v = a[k][k].clone() * a[i][j].clone() - a[i][k].clone() * a[k][j].clone();
                    a[i][j] = v / prev.clone();
                }
                a[i][k] = Z::zero();
            }
            prev = a[k][k].clone();
        }
        // the right block is det(P) adj(A) for the row permutation P
        let rows = a
            .into_iter()
            .map(|r| {
                let right = Vector(r[n..].to_vec());
                if swaps_odd {
                    -&right
                } else {
                    right
                }
            })
            .collect();
        Matrix { rows, ncols: n }
    }

    /// Row Hermite normal form `(H, U)` with `U * self = H`; see the module
    /// docs for the convention. Panics on an empty matrix.
    pub fn hermite_normal_form(&self) -> (Self, Self) {
        assert!(self.nrows() > 0, "Hermite normal form of an empty matrix");
        let m = self.nrows();
        let n = self.ncols;
        // Upper HNF of the column-reversed matrix, then undo the reversal.
        let mut a: Vec<Vec<Z>> = self.rows.iter().map(|r| r.0.iter().rev().cloned().collect()).collect();
        let mut u: Vec<Vec<Z>> = Matrix::<Z>::identity(m).rows.into_iter().map(|r| r.0).collect();
        let rank = upper_hnf_in_place(&mut a, &mut u, n);

        let mut order: Vec<usize> = (0..rank).rev().collect();
        order.extend(rank..m);
        let h_rows = order
            .iter()
            .map(|&i| Vector(a[i].iter().rev().cloned().collect()))
            .collect();
        let u_rows = order.iter().map(|&i| Vector(u[i].clone())).collect();
        (Matrix { rows: h_rows, ncols: n }, Matrix { rows: u_rows, ncols: m })
    }

    /// Basis of the integer kernel `{x in Z^n : self * x = 0}`.
    pub fn integer_kernel(&self) -> Vec<Vector<Z>> {
        if self.nrows() == 0 {
            return Matrix::identity(self.ncols).rows;
        }
        let (h, u) = self.transpose().hermite_normal_form();
        let rank = h.rows.iter().filter(|r| !r.is_zero()).count();
        u.rows[rank..].to_vec()
    }

    /// Some integer solution of `self * x = b`, if one exists.
    pub fn solve_integer(&self, b: &Vector<Z>) -> Option<Vector<Z>> {
        assert_eq!(b.dim(), self.nrows());
        if self.nrows() == 0 {
            return Some(Vector::zero(self.ncols));
        }
        // U * A^T = H, so A * U^T = H^T and x = U^T y.
        let (h, u) = self.transpose().hermite_normal_form();
        let rank = h.rows.iter().filter(|r| !r.is_zero()).count();
        let mut rest = b.0.clone();
        let mut y = vec![Z::zero(); self.ncols];
        for k in (0..rank).rev() {
            let row = &h.rows[k].0;
            let p = row.iter().rposition(|c| !c.is_zero()).expect("nonzero row");
            let (q, r) = rest[p].div_rem(&row[p]);
            if !r.is_zero() {
                return None;
            }
            for (j, c) in row.iter().enumerate() {
                rest[j] = rest[j].clone() - q.clone() * c.clone();
            }
            y[k] = q;
        }
        if rest.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(u.left_mul_vec(&Vector(y)))
    }

    /// Unique rational solution of a square nonsingular system.
    pub fn solve_rational(&self, b: &[Ratio<Z>]) -> Option<Vec<Ratio<Z>>> {
        let n = self.nrows();
        assert_eq!(n, self.ncols, "solve_rational needs a square matrix");
        let mut a: Vec<Vec<Ratio<Z>>> = self
            .rows
            .iter()
            .zip(b)
            .map(|(r, bi)| {
                let mut row = r.to_rational();
                row.push(bi.clone());
                row
            })
            .collect();
        for k in 0..n {
            let p = (k..n).find(|&i| !a[i][k].is_zero())?;
            a.swap(p, k);
            let piv = a[k][k].clone();
            for j in k..=n {
                a[k][j] = a[k][j].clone() / piv.clone();
            }
            for i in 0..n {
                if i != k && !a[i][k].is_zero() {
                    let f = a[i][k].clone();
                    for j in k..=n {
                        let v = a[k][j].clone() * f.clone();
                        a[i][j] = a[i][j].clone() - v;
                    }
                }
            }
        }
        Some(a.into_iter().map(|r| r[n].clone()).collect())
    }
}

/// Upper row HNF on `a` (m x n) with the transform accumulated in `u`.
/// Returns the rank; nonzero rows come first.
fn upper_hnf_in_place<Z: Int>(a: &mut [Vec<Z>], u: &mut [Vec<Z>], n: usize) -> usize {
    let m = a.len();
    let mut r = 0;
    for col in 0..n {
        if r == m {
            break;
        }
        for i in r + 1..m {
            if a[i][col].is_zero() {
                continue;
            }
            if a[r][col].is_zero() {
                a.swap(r, i);
                u.swap(r, i);
                continue;
            }
            let eg = a[r][col].extended_gcd(&a[i][col]);
            let p = a[r][col].clone() / eg.gcd.clone();
            let q = a[i][col].clone() / eg.gcd.clone();
            combine_rows(a, r, i, &eg.x, &eg.y, &q, &p);
            combine_rows(u, r, i, &eg.x, &eg.y, &q, &p);
        }
        if a[r][col].is_zero() {
            continue;
        }
        if a[r][col].is_negative() {
            negate_row(&mut a[r]);
            negate_row(&mut u[r]);
        }
        for i in 0..r {
            if a[i][col].is_zero() {
                continue;
            }
            let f = floor_div(&a[i][col], &a[r][col]);
            sub_multiple(a, i, r, &f);
            sub_multiple(u, i, r, &f);
        }
        r += 1;
    }
    r
}

/// rows (r, i) <- (x*r + y*i, -q*r + p*i); the 2x2 transform has determinant 1.
fn combine_rows<Z: Int>(a: &mut [Vec<Z>], r: usize, i: usize, x: &Z, y: &Z, q: &Z, p: &Z) {
    let len = a[r].len();
    for j in 0..len {
        let ar = a[r][j].clone();
        let ai = a[i][j].clone();
        a[r][j] = x.clone() * ar.clone() + y.clone() * ai.clone();
        a[i][j] = p.clone() * ai - q.clone() * ar;
    }
}

fn negate_row<Z: Int>(row: &mut [Z]) {
    for c in row.iter_mut() {
        *c = -c.clone();
    }
}

fn sub_multiple<Z: Int>(a: &mut [Vec<Z>], target: usize, src: usize, f: &Z) {
    let len = a[target].len();
    for j in 0..len {
        let v = a[src][j].clone() * f.clone();
        a[target][j] = a[target][j].clone() - v;
    }
}

impl<Z: fmt::Debug> fmt::Debug for Matrix<Z> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows.iter()).finish()
    }
}

pub fn determinant<Z: Int>(m: &Matrix<Z>) -> Z {
    m.determinant()
}

pub fn hermite_normal_form<Z: Int>(m: &Matrix<Z>) -> (Matrix<Z>, Matrix<Z>) {
    m.hermite_normal_form()
}

/// True iff the `d` vectors of dimension `d` form a basis of `Z^d`.
///
/// Panics when the number of vectors differs from their dimension.
pub fn is_unimodular_basis<Z: Int>(vs: &[Vector<Z>]) -> bool {
    let d = vs.first().map_or(0, Vector::dim);
    assert_eq!(vs.len(), d, "need exactly d vectors of dimension d");
    Matrix::from_rows(vs.to_vec(), d).determinant().abs().is_one()
}

/// Index of the lattice spanned by `vs` inside the saturated lattice
/// `span(vs) ∩ Z^n`; zero when `vs` is linearly dependent.
pub fn lattice_index<Z: Int>(vs: &[Vector<Z>]) -> Z {
    let Some(n) = vs.first().map(Vector::dim) else {
        return Z::one();
    };
    let basis = saturated_basis(vs, n);
    if basis.len() != vs.len() {
        return Z::zero();
    }
    let b = Matrix::from_rows(basis, n).transpose();
    let coords: Vec<Vector<Z>> = vs
        .iter()
        .map(|v| b.solve_integer(v).expect("vector lies in its saturated span"))
        .collect();
    let k = coords.len();
    Matrix::from_rows(coords, k).determinant().abs()
}

/// HNF basis of `span(vs) ∩ Z^n` (the saturation of the spanned lattice).
pub fn saturated_basis<Z: Int>(vs: &[Vector<Z>], n: usize) -> Vec<Vector<Z>> {
    if vs.iter().all(Vector::is_zero) {
        return Vec::new();
    }
    let g = Matrix::from_rows(vs.to_vec(), n);
    let w = g.integer_kernel();
    let basis = if w.is_empty() {
        Matrix::identity(n).into_rows()
    } else {
        Matrix::from_rows(w, n).integer_kernel()
    };
    let (h, _) = Matrix::from_rows(basis, n).hermite_normal_form();
    h.into_rows().into_iter().filter(|r| !r.is_zero()).collect()
}

/// HNF basis of the lattice generated by `vs` (not saturated).
pub fn lattice_basis<Z: Int>(vs: &[Vector<Z>], n: usize) -> Vec<Vector<Z>> {
    if vs.is_empty() {
        return Vec::new();
    }
    let (h, _) = Matrix::from_rows(vs.to_vec(), n).hermite_normal_form();
    h.into_rows().into_iter().filter(|r| !r.is_zero()).collect()
}

/// True iff `vs` generate all of `Z^n` as a group.
pub fn generates_lattice<Z: Int>(vs: &[Vector<Z>], n: usize) -> bool {
    let b = lattice_basis(vs, n);
    b.len() == n && Matrix::from_rows(b, n).determinant().abs().is_one()
}

pub fn primitive<Z: Int>(v: &Vector<Z>) -> Result<Vector<Z>> {
    v.primitive()
}
