use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

pub const MAX_PARTITION_SIZE: usize = 10;

/// A partition of `{1, …, n}` into non-empty blocks. Block `b` is a bit mask
/// with bit `i - 1` set when `i ∈ b`; blocks are ordered by their smallest
/// element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<u32>,
}

impl SetPartition {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[u32] {
        &self.blocks
    }

    /// Re-labels the ground set: element `i` becomes `elements[i - 1]`
    /// (given as 1-based labels).
    pub fn relabel(&self, elements: &[usize]) -> Vec<u32> {
        self.blocks
            .iter()
            .map(|&b| {
                (0..self.n)
                    .filter(|i| b & (1 << i) != 0)
                    .fold(0u32, |acc, i| acc | 1 << (elements[i] - 1))
            })
            .collect()
    }
}

/// Bell numbers via the Bell triangle.
pub fn bell_number(n: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for &x in &row {
            let last = *next.last().unwrap();
            next.push(last + x);
        }
        row = next;
    }
    row[0]
}

/// Every partition of `{1, …, n}`, generated from restricted growth strings
/// in lexicographic order.
pub fn set_partitions(n: usize) -> Result<Vec<SetPartition>> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "set must be non-empty",
        });
    }
    if n > MAX_PARTITION_SIZE {
        return Err(Error::OrderCapExceeded {
            order: n,
            cap: MAX_PARTITION_SIZE,
        });
    }
    let mut out = Vec::with_capacity(bell_number(n) as usize);
    // a[i] is the block of element i; m[i] = max(a[0..=i]).
    let mut a = vec![0usize; n];
    let mut m = vec![0usize; n];
    loop {
        let blocks_len = m[n - 1] + 1;
        let mut blocks = vec![0u32; blocks_len];
        for (i, &b) in a.iter().enumerate() {
            blocks[b] |= 1 << i;
        }
        out.push(SetPartition { n, blocks });

        let Some(i) = (1..n).rev().find(|&i| a[i] <= m[i - 1]) else {
            break;
        };
        a[i] += 1;
        m[i] = m[i - 1].max(a[i]);
        for j in i + 1..n {
            a[j] = 0;
            m[j] = m[i];
        }
    }
    Ok(out)
}
