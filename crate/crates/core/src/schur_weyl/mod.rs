//! Schur–Weyl duality on `(ℂ^d)^{⊗k}`: permutation operators, isotypic
//! projectors, the weak-Schur-sampling law, an explicit Schur block basis
//! and the block structure of `ψ^{⊗k}` for bipartite pure `ψ`.

mod basis;
mod iid;
mod law;
mod projector;
mod young;

pub use basis::{schur_block_basis, SchurBlock, SchurBlockBasis, MAX_BLOCK_BASIS_K};
pub use iid::{
    iid_coefficients, verify_iid_decomposition, IidLambdaReport, IidReport, CLUSTER_TOLERANCE,
};
pub use law::{
    schur_law, schur_law_bruteforce, schur_law_jacobi_trudi, schur_law_via_characters, LawEntry,
    SchurLaw,
};
pub use projector::{
    cycle_bound, irrep_projector, numerical_rank_of, permutation_index_map, permutation_operator,
    trace_power_product, IrrepProjector,
};
pub use young::{standard_tableaux, RowWord, YoungOrthogonalForm};
