pub mod distillation;
pub mod ensembles;
pub mod error;
pub mod limits;
pub mod partitions;
pub mod permutation;
pub mod quantum;
pub mod sampling;
pub mod schur_weyl;
pub mod symmetric;
pub mod tomography;

pub use error::{Error, Result};
pub use limits::Limits;
