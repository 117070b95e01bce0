//! State families used in the no-go constructions: Haar, Haar-subsystem,
//! restricted Haar-subsystem and the flag-qubit pseudoentangled wrapper,
//! with exact and empirical `k`-copy moments.

mod entropy;
mod moments;
mod spec;

pub use entropy::{entropy_test_instance, planted_entropies, EntropyTestInstance, PlantedEntropies};
pub use moments::{
    bernstein_epsilon, concentration_check, empirical_moment, haar_subsystem_moment_by_subsets,
    moment_distance, moment_operator, moment_trace_norm, subsystem_distance_closed_form,
    symmetric_dimension, ConcentrationReport, Exactness, MomentDistance, MomentOperator,
    BERNSTEIN_FAILURE,
};
pub use spec::{sample_state, EnsembleSpec};
