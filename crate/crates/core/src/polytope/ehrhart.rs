use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use super::Polytope;
use crate::scalar::{binomial, int, Int};

/// Dilation counts, h*-vector and Ehrhart polynomial of a lattice polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EhrhartData<Z: Int> {
    /// `|kP ∩ Z^d|` for `k = 0..=d+1`.
    pub counts: Vec<Z>,
    /// Numerator of the Ehrhart series, trailing zeros removed.
    pub hstar: Vec<Z>,
    /// Coefficients of the Ehrhart polynomial, constant term first.
    pub poly_coeffs: Vec<Ratio<Z>>,
}

impl<Z: Int> EhrhartData<Z> {
    pub(super) fn of(p: &Polytope<Z>) -> Self {
        let d = p.dim();
        let counts: Vec<Z> = (0..=d as i64 + 1)
            .map(|k| int::<Z>(p.count_dilated(&int(k)) as i64))
            .collect();
        Self::from_counts(d, counts)
    }

    /// Builds the data from `|kP ∩ Z^d|` for `k = 0..=d+1`.
    pub fn from_counts(d: usize, counts: Vec<Z>) -> Self {
        assert_eq!(counts.len(), d + 2, "need counts for k = 0..=d+1");
        let mut hstar: Vec<Z> = (0..=d)
            .map(|j| {
                (0..=j).fold(Z::zero(), |acc, i| {
                    let term = binomial::<Z>(d as i64 + 1, i as i64) * counts[j - i].clone();
                    if i % 2 == 0 {
                        acc + term
                    } else {
                        acc - term
                    }
                })
            })
            .collect();
        while hstar.len() > 1 && hstar.last().is_some_and(Zero::is_zero) {
            hstar.pop();
        }
        let poly_coeffs = interpolate(&counts[..=d]);
        EhrhartData {
            counts,
            hstar,
            poly_coeffs,
        }
    }

    pub fn dim(&self) -> usize {
        self.poly_coeffs.len() - 1
    }

    /// Normalized volume `d! · vol(P)`, the sum of the h*-vector.
    pub fn normalized_volume(&self) -> Z {
        self.hstar.iter().fold(Z::zero(), |a, h| a + h.clone())
    }

    pub fn evaluate(&self, k: &Z) -> Ratio<Z> {
        let k = Ratio::from_integer(k.clone());
        self.poly_coeffs
            .iter()
            .rev()
            .fold(Ratio::zero(), |acc, c| acc * k.clone() + c.clone())
    }

    /// True iff every coefficient of the Ehrhart polynomial is positive.
    pub fn is_positive(&self) -> bool {
        self.poly_coeffs.iter().all(Signed::is_positive)
    }

    /// Coefficients rendered as `a` or `a/b`.
    pub fn coefficient_strings(&self) -> Vec<String> {
        self.poly_coeffs.iter().map(ToString::to_string).collect()
    }
}

/// Monomial coefficients of the polynomial of degree `< values.len()` taking
/// `values[k]` at `k`, via Newton forward differences.
fn interpolate<Z: Int>(values: &[Z]) -> Vec<Ratio<Z>> {
    let n = values.len();
    let mut diffs: Vec<Ratio<Z>> = values.iter().cloned().map(Ratio::from_integer).collect();
    let mut leading = Vec::with_capacity(n);
    for j in 0..n {
        leading.push(diffs[0].clone());
        for i in 0..n - j - 1 {
            diffs[i] = diffs[i + 1].clone() - diffs[i].clone();
        }
    }
    // Σ Δ^j f(0) · C(t, j), expanding C(t, j) = t(t-1)…(t-j+1)/j!.
    let mut coeffs = vec![Ratio::<Z>::zero(); n];
    let mut falling = vec![Ratio::<Z>::one()];
    let mut factorial = Z::one();
    for (j, dj) in leading.iter().enumerate() {
        if j > 0 {
            factorial = factorial * int::<Z>(j as i64);
        }
        for (c, f) in coeffs.iter_mut().zip(&falling) {
            *c = c.clone() + dj.clone() * f.clone() / Ratio::from_integer(factorial.clone());
        }
        // falling *= (t - j)
        let shift = Ratio::from_integer(int::<Z>(j as i64));
        let mut next = vec![Ratio::zero(); falling.len() + 1];
        for (i, f) in falling.iter().enumerate() {
            next[i + 1] = next[i + 1].clone() + f.clone();
            next[i] = next[i].clone() - f.clone() * shift.clone();
        }
        falling = next;
    }
    coeffs
}
