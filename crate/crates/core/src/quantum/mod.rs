//! Dense quantum linear algebra at desk dimensions: states, density
//! operators, partial traces, Schmidt data, entropies and distances.

mod ops;
mod random;
mod state;

pub use ops::{
    binary_entropy, fidelity, hermitian_eigen, partial_trace, renyi_entropy, schmidt,
    trace_distance, trace_norm_hermitian, RenyiOrder, Schmidt,
};
pub use random::{haar_state, random_density, random_unitary};
pub use state::{numerical_rank, BipartiteState, DensityOperator, PureState, Spectrum};

pub use num_complex::Complex64 as C64;

/// Numerical rank tolerance used for `S_0` and law supports.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Deviation from Hermiticity tolerated (and then symmetrized away) when a
/// density operator is constructed.
pub const HERMITICITY_TOLERANCE: f64 = 1e-8;

/// Largest entry modulus of a complex matrix.
pub fn max_abs(m: &nalgebra::DMatrix<C64>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}
