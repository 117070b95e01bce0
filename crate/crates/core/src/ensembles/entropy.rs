use rand::Rng;
use serde::{Deserialize, Serialize};

use super::spec::{sample_state, EnsembleSpec};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::quantum::{binary_entropy, renyi_entropy, RenyiOrder};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlantedEntropies {
    pub s1: f64,
    pub s_min: f64,
}

/// Entropies of the flag-qubit construction, whose reduced state is
/// `(1−η)·I_{2^s}/2^s ⊕ η·ψ_A`:
/// `S₁ = (1−η)s + ηS₁(ψ_A) + h₂(η)` and
/// `S_min = min{s − log₂(1−η), S_min(ψ_A) − log₂η}`.
pub fn planted_entropies(eta: f64, s_min: f64, inner_s1: f64, inner_s_min: f64) -> Result<PlantedEntropies> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::domain(format!("η = {eta} outside [0, 1]")));
    }
    if s_min < 0.0 || inner_s1 < 0.0 || inner_s_min < 0.0 {
        return Err(Error::domain("entropies must be non-negative"));
    }
    let s1 = (1.0 - eta) * s_min + eta * inner_s1 + binary_entropy(eta);
    let planted = if eta < 1.0 { s_min - (1.0 - eta).log2() } else { f64::INFINITY };
    let hidden = if eta > 0.0 { inner_s_min - eta.log2() } else { f64::INFINITY };
    Ok(PlantedEntropies { s1, s_min: planted.min(hidden) })
}

/// The two families separating `S₁ ≤ α` from `S₁ ≥ β` on `n` qubits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyTestInstance {
    pub alpha: f64,
    pub beta: f64,
    pub n: usize,
    pub m: usize,
    pub eta: f64,
    pub haar_family: EnsembleSpec,
    pub subsystem_family: EnsembleSpec,
    /// Mean planted entropies over the sampled inner states.
    pub haar_entropies: PlantedEntropies,
    pub subsystem_entropies: PlantedEntropies,
    pub samples: usize,
    /// `2^{αn/(2β)}`, an order-of-magnitude figure with constant 1.
    pub sample_lower_bound: f64,
}

fn mean_planted<R: Rng + ?Sized>(
    inner: &EnsembleSpec,
    eta: f64,
    samples: usize,
    rng: &mut R,
    limits: &Limits,
) -> Result<PlantedEntropies> {
    let mut acc = PlantedEntropies { s1: 0.0, s_min: 0.0 };
    for _ in 0..samples {
        let spec = sample_state(inner, rng, limits)?.spectrum_a();
        let p = planted_entropies(
            eta,
            0.0,
            renyi_entropy(&spec, RenyiOrder::One),
            renyi_entropy(&spec, RenyiOrder::Infinity),
        )?;
        acc.s1 += p.s1 / samples as f64;
        acc.s_min += p.s_min / samples as f64;
    }
    Ok(acc)
}

/// `m = ⌊nα/β⌋`, `η = α/n`, no planted ebits. Inner entropies are measured
/// on `samples` seeded draws; at small `n` the asymptotic `o(1)` terms are
/// not small, so the exact planted values are what is reported.
pub fn entropy_test_instance<R: Rng + ?Sized>(
    alpha: f64,
    beta: f64,
    n: usize,
    samples: usize,
    rng: &mut R,
    limits: &Limits,
) -> Result<EntropyTestInstance> {
    if !(alpha > 0.0 && alpha < beta && beta < n as f64) {
        return Err(Error::domain(format!("need 0 < α < β < n, got α={alpha}, β={beta}, n={n}")));
    }
    if samples == 0 {
        return Err(Error::domain("need at least one sample"));
    }
    let m = ((n as f64 * alpha / beta) + 1e-12).floor() as usize;
    let eta = alpha / n as f64;
    let haar = EnsembleSpec::haar(n);
    let sub = EnsembleSpec::haar_subsystem(n, m);
    Ok(EntropyTestInstance {
        alpha,
        beta,
        n,
        m,
        eta,
        haar_entropies: mean_planted(&haar, eta, samples, rng, limits)?,
        subsystem_entropies: mean_planted(&sub, eta, samples, rng, limits)?,
        haar_family: EnsembleSpec::pseudoentangled(haar, eta, 0),
        subsystem_family: EnsembleSpec::pseudoentangled(sub, eta, 0),
        samples,
        sample_lower_bound: 2f64.powf(alpha * n as f64 / (2.0 * beta)),
    })
}
