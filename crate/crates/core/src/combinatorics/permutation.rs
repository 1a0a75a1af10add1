use alloc::vec::Vec;

use crate::{Error, Result};

/// A permutation of `{1, …, n}` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let n = mapping.len();
        if n == 0 {
            return Err(Error::MalformedPermutation("empty"));
        }
        let mut seen = alloc::vec![false; n];
        for &v in &mapping {
            if v == 0 || v > n {
                return Err(Error::MalformedPermutation("entry outside 1..=n"));
            }
            if seen[v - 1] {
                return Err(Error::MalformedPermutation("repeated entry"));
            }
            seen[v - 1] = true;
        }
        Ok(Self(mapping))
    }

    pub fn identity(n: usize) -> Self {
        Self((1..=n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Number of indices `i` with `σ_i > σ_{i+1}`.
    pub fn descent_count(&self) -> usize {
        self.0.windows(2).filter(|w| w[0] > w[1]).count()
    }

    /// Rearranges into the lexicographic successor; false once the last
    /// permutation has been reached.
    fn advance(&mut self) -> bool {
        let p = &mut self.0;
        let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
            return false;
        };
        let pivot = i - 1;
        let j = (i..p.len()).rev().find(|&j| p[j] > p[pivot]).unwrap();
        p.swap(pivot, j);
        p[i..].reverse();
        true
    }
}

/// All permutations of `{1, …, n}` in lexicographic order.
pub struct Permutations {
    next: Option<Permutation>,
}

impl Permutations {
    pub fn new(n: usize) -> Self {
        Self {
            next: (n > 0).then(|| Permutation::identity(n)),
        }
    }
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if succ.advance() {
            self.next = Some(succ);
        }
        Some(current)
    }
}
