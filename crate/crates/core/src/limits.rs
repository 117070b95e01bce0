use serde::{Deserialize, Serialize};

/// Size caps for the exhaustive routines. Exceeding a cap produces
/// [`Error::Capacity`](crate::Error::Capacity) rather than an attempt.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest dense Hilbert-space dimension per side (`d^k`).
    pub dense_dim: usize,
    /// Largest number of partitions one enumeration may return.
    pub partitions: usize,
    /// Largest number of subsets averaged by subset enumeration.
    pub subsets: u128,
}

pub const DEFAULT_DENSE_DIM: usize = 4096;
pub const DEFAULT_SUBSETS: u128 = 100_000;

impl Default for Limits {
    fn default() -> Self {
        Limits {
            dense_dim: DEFAULT_DENSE_DIM,
            partitions: crate::partitions::DEFAULT_PARTITION_CAP,
            subsets: DEFAULT_SUBSETS,
        }
    }
}

impl Limits {
    /// Fails with a capacity error unless `d^k` fits the dense cap.
    pub fn check_dense(&self, what: &'static str, d: usize, k: usize) -> crate::Result<usize> {
        let mut dim: u128 = 1;
        for _ in 0..k {
            dim = dim.saturating_mul(d as u128);
        }
        if dim > self.dense_dim as u128 {
            return Err(crate::Error::capacity(what, dim, self.dense_dim as u128));
        }
        Ok(dim as usize)
    }
}
