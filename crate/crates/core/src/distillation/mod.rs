//! The Schur-transform distillation protocol: its exact outcome law, rate
//! statistics and bounds, the two-sided robust variant and a dense
//! simulator of single runs.

mod bounds;
mod protocol;
mod robust;

pub use bounds::{
    boosted_probability, distill_law, dominance_check, exact_tail, expected_ebits,
    guaranteed_rate, guaranteed_rate_blocked, probability_upper_bound, rate_statistics,
    tail_bound, tail_probability, DistillationOutcome, DominanceReport, DominanceRow,
    GuaranteedRate, RateReport, ThresholdProbability, DOMINANCE_SLACK, GUARANTEE_PROBABILITY,
};
pub use protocol::{run_protocol, ProtocolRun, ProtocolSimulator};
pub use robust::{
    joint_law, joint_two_sided_sample, perturbed_iid, JointEntry, JointLaw, JointSample,
};
