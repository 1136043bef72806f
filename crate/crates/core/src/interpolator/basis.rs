use serde::{Deserialize, Serialize};

use crate::numerics::Real;

/// Monomials of total degree at most `m − 1` in graded-lexicographic order.
///
/// Empty when `m = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialBasis {
    pub n: usize,
    pub degree_bound: i64,
    pub exponents: Vec<Vec<u32>>,
}

/// All `α ∈ N^n` with `|α| = d`, lexicographically descending.
fn exponents_of_degree(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in exponents_of_degree(n - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

pub fn poly_basis(n: usize, m: u32) -> PolynomialBasis {
    let exponents = (0..m).flat_map(|d| exponents_of_degree(n, d)).collect();
    PolynomialBasis { n, degree_bound: m as i64 - 1, exponents }
}

impl PolynomialBasis {
    /// `Q`, the dimension of the polynomial space.
    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Every basis monomial at `x`.
    pub fn eval<T: Real>(&self, x: &[T]) -> Vec<T> {
        self.exponents
            .iter()
            .map(|alpha| {
                let mut acc = T::one(x[0].ctx());
                for (xi, &a) in x.iter().zip(alpha) {
                    for _ in 0..a {
                        acc = acc.mul(xi);
                    }
                }
                acc
            })
            .collect()
    }
}
