use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{set_partitions, MAX_PARTITION_SIZE};
use crate::{Error, Result};

/// Complex values keyed by the non-empty subsets of `{1, …, n}`, subsets
/// encoded as bit masks (bit `i - 1` ↔ element `i`).
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetTable {
    n: usize,
    values: Vec<Complex64>,
}

impl SubsetTable {
    fn check_size(n: usize) -> Result<()> {
        if n == 0 || n > MAX_PARTITION_SIZE {
            return Err(Error::InvalidParameter {
                name: "n",
                reason: "subset tables support 1 ≤ n ≤ 10",
            });
        }
        Ok(())
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(u32) -> Complex64) -> Result<Self> {
        Self::check_size(n)?;
        let mut values = vec![Complex64::new(0.0, 0.0); 1 << n];
        for (mask, v) in values.iter_mut().enumerate().skip(1) {
            *v = f(mask as u32);
        }
        Ok(Self { n, values })
    }

    /// Builds a table from explicit `(mask, value)` entries; every non-empty
    /// subset must be present.
    pub fn from_entries(
        n: usize,
        entries: impl IntoIterator<Item = (u32, Complex64)>,
    ) -> Result<Self> {
        Self::check_size(n)?;
        let mut values: Vec<Option<Complex64>> = vec![None; 1 << n];
        for (mask, v) in entries {
            if mask == 0 || (mask as usize) >= values.len() {
                return Err(Error::InvalidParameter {
                    name: "mask",
                    reason: "entry is not a non-empty subset of {1..n}",
                });
            }
            values[mask as usize] = Some(v);
        }
        let mut out = vec![Complex64::new(0.0, 0.0); 1 << n];
        for mask in 1..values.len() {
            out[mask] = values[mask].ok_or(Error::IncompleteMoments { mask: mask as u32 })?;
        }
        Ok(Self { n, values: out })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, mask: u32) -> Complex64 {
        self.values[mask as usize]
    }

    /// Non-empty subsets in increasing mask order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, Complex64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .skip(1)
            .map(|(m, &v)| (m as u32, v))
    }

    pub fn max_abs_difference(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n);
        self.iter()
            .zip(other.iter())
            .map(|((_, a), (_, b))| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Connected functions from moments: the unique table with
/// `Ω(S) = Σ_{π ∈ Π(S)} ∏_{B ∈ π} Ωᶜ(B)` for every non-empty `S`.
///
/// Solved subset by subset, isolating the block that contains `min S`:
/// `Ω(S) = Σ_{min S ∈ T ⊆ S} Ωᶜ(T) Ω(S \ T)` with `Ω(∅) = 1`.
pub fn connected_from_moments(moments: &SubsetTable) -> SubsetTable {
    let n = moments.n;
    let moment = |mask: u32| {
        if mask == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            moments.get(mask)
        }
    };
    let mut connected = vec![Complex64::new(0.0, 0.0); 1 << n];
    for s in 1u32..(1 << n) {
        let lowest = s & s.wrapping_neg();
        let rest = s ^ lowest;
        let mut acc = moment(s);
        // proper subsets R of `rest`, T = lowest | R ≠ S
        let mut r = rest;
        while r != 0 {
            r = (r - 1) & rest;
            let t = lowest | r;
            acc -= connected[t as usize] * moment(s ^ t);
        }
        connected[s as usize] = acc;
    }
    SubsetTable {
        n,
        values: connected,
    }
}

/// Moments re-assembled from connected functions by summing over set
/// partitions of each subset.
pub fn assemble_moments(connected: &SubsetTable) -> SubsetTable {
    let n = connected.n;
    let by_size: Vec<_> = (1..=n)
        .map(|m| set_partitions(m).expect("size within table bounds"))
        .collect();
    let mut values = vec![Complex64::new(0.0, 0.0); 1 << n];
    for s in 1u32..(1 << n) {
        let elements: Vec<usize> = (0..n)
            .filter(|i| s & (1 << i) != 0)
            .map(|i| i + 1)
            .collect();
        values[s as usize] = by_size[elements.len() - 1]
            .iter()
            .map(|p| {
                p.relabel(&elements)
                    .into_iter()
                    .map(|b| connected.get(b))
                    .product::<Complex64>()
            })
            .sum();
    }
    SubsetTable { n, values }
}

/// Moments of a mean-zero quasi-free table: every subset's value is the sum
/// over its perfect matchings of products of `two_point(i, j)`, with `i < j`
/// zero-based element indices.
pub fn wick_moments(
    n: usize,
    two_point: impl Fn(usize, usize) -> Complex64,
) -> Result<SubsetTable> {
    SubsetTable::check_size(n)?;
    let mut values = vec![Complex64::new(0.0, 0.0); 1 << n];
    values[0] = Complex64::new(1.0, 0.0);
    // increasing masks: every strict subset is filled before it is needed
    for s in 1u32..(1 << n) {
        if s.count_ones() % 2 == 1 {
            continue;
        }
        let i = s.trailing_zeros() as usize;
        let rest = s & !(1 << i);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut bits = rest;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            acc += two_point(i, j) * values[(rest & !(1 << j)) as usize];
        }
        values[s as usize] = acc;
    }
    values[0] = Complex64::new(0.0, 0.0);
    Ok(SubsetTable { n, values })
}
