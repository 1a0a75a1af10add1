use alloc::vec;
use alloc::vec::Vec;

use super::Permutations;
use crate::{Error, Result};

/// Largest order whose Eulerian row (and `n!`) fits exactly in `u128`.
pub const MAX_EXACT_ORDER: usize = 33;

/// Largest order accepted by [`eulerian_row_by_enumeration`].
pub const MAX_ENUMERATION_ORDER: usize = 9;

/// Row `n` of the Eulerian triangle: `coefficients[k - 1]` is the number of
/// permutations of `{1, …, n}` with `k - 1` descents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerianRow {
    n: usize,
    coefficients: Vec<u128>,
}

impl EulerianRow {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &[u128] {
        &self.coefficients
    }

    /// `c_{n,k}` for `1 ≤ k ≤ n`.
    pub fn get(&self, k: usize) -> u128 {
        self.coefficients[k - 1]
    }

    pub fn sum(&self) -> u128 {
        self.coefficients.iter().sum()
    }

    pub fn is_palindromic(&self) -> bool {
        self.coefficients.iter().eq(self.coefficients.iter().rev())
    }
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Builds the row from `c_{n,k} = k c_{n-1,k} + (n + 1 - k) c_{n-1,k-1}` with
/// unit boundary values.
pub fn eulerian_row_recursive(n: usize) -> Result<EulerianRow> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "Eulerian rows start at n = 1",
        });
    }
    if n > MAX_EXACT_ORDER {
        return Err(Error::OrderCapExceeded {
            order: n,
            cap: MAX_EXACT_ORDER,
        });
    }
    let mut row = vec![1u128];
    for m in 2..=n {
        let mut next = vec![1u128; m];
        for k in 2..m {
            next[k - 1] = k as u128 * row[k - 1] + (m + 1 - k) as u128 * row[k - 2];
        }
        row = next;
    }
    Ok(EulerianRow {
        n,
        coefficients: row,
    })
}

/// Builds the row by counting descents over all `n!` permutations.
pub fn eulerian_row_by_enumeration(n: usize) -> Result<EulerianRow> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "Eulerian rows start at n = 1",
        });
    }
    if n > MAX_ENUMERATION_ORDER {
        return Err(Error::OrderCapExceeded {
            order: n,
            cap: MAX_ENUMERATION_ORDER,
        });
    }
    let mut coefficients = vec![0u128; n];
    for p in Permutations::new(n) {
        coefficients[p.descent_count()] += 1;
    }
    Ok(EulerianRow { n, coefficients })
}
