//! Shared inputs for the benchmarks.

use posfact_core::corpus::Corpus;
use posfact_core::CMatrix;

pub const SIZES: [usize; 4] = [4, 16, 32, 64];

/// A fixed member of size `n` with eigenvector condition at most 1e3.
pub fn member(n: usize) -> CMatrix {
    Corpus::new(n as u64).member(n, 1e3).t
}
