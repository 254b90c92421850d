//! Shared fixtures for the criterion benchmarks.

use qchan_core::catalog::{epsilon3, epsilon4};
use qchan_core::channel::{random_channel, KrausSet};

pub fn eps3() -> KrausSet {
    epsilon3().kraus
}

pub fn eps4() -> KrausSet {
    epsilon4().kraus
}

/// Deterministic random TP channel for benchmark input.
pub fn tp_channel(dim: usize, rank: usize, seed: u64) -> KrausSet {
    random_channel(dim, dim, rank, seed).expect("benchmark shapes are valid")
}
