//! Permutations, Eulerian numbers, set partitions and connected functions.

mod cumulant;
mod eulerian;
mod partition;
mod permutation;

pub use cumulant::{assemble_moments, connected_from_moments, wick_moments, SubsetTable};
pub use eulerian::{
    eulerian_row_by_enumeration, eulerian_row_recursive, factorial, EulerianRow,
    MAX_ENUMERATION_ORDER, MAX_EXACT_ORDER,
};
pub use partition::{bell_number, set_partitions, SetPartition, MAX_PARTITION_SIZE};
pub use permutation::{Permutation, Permutations};
