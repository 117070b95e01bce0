use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::partitions::{
    bigrational_to_f64, dim_symmetric_irrep, log2_biguint, plancherel, Partition,
};
use crate::quantum::{renyi_entropy, RenyiOrder, Spectrum};
use crate::schur_weyl::schur_law;

/// One outcome of the distillation protocol: the measured label, the ebits
/// left after discarding `U_λ`, and the outcome probability.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistillationOutcome {
    pub lambda: Partition,
    pub ebits: f64,
    pub probability: f64,
    #[serde(skip)]
    pub dim_v: BigUint,
}

/// The outcome law of the protocol on `k` copies of a state with Schmidt
/// spectrum `s`, in canonical partition order.
pub fn distill_law(s: &Spectrum, k: usize, limits: &Limits) -> Result<Vec<DistillationOutcome>> {
    let law = schur_law(s, k, limits)?;
    Ok(law
        .entries
        .into_iter()
        .map(|e| {
            let dim_v = dim_symmetric_irrep(&e.lambda);
            DistillationOutcome { ebits: log2_biguint(&dim_v), probability: e.prob, lambda: e.lambda, dim_v }
        })
        .collect())
}

/// `E[ebits]` of an outcome list.
pub fn expected_ebits(outcomes: &[DistillationOutcome]) -> f64 {
    outcomes.iter().map(|o| o.probability * o.ebits).sum()
}

/// `Pr(ebits ≥ t)` with a `1e−9` slack on the comparison so that integral
/// ebit counts are not lost to rounding of `log₂ dim V`.
pub fn tail_probability(outcomes: &[DistillationOutcome], t: f64) -> f64 {
    outcomes.iter().filter(|o| o.ebits >= t - 1e-9).map(|o| o.probability).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdProbability {
    pub threshold: f64,
    pub probability: f64,
}

/// The guaranteed-rate figure and the regime conditions behind it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GuaranteedRate {
    pub s_min: f64,
    pub k: usize,
    /// Copies grouped per protocol input (1 unless blocked).
    pub block: usize,
    /// `min{S_min/4, log₂k/4}` (per original copy when blocked).
    pub rate: f64,
    pub probability: f64,
    /// The five-repetition figure `min{S_min/20, log₂k/20}`.
    pub boosted_rate: f64,
    pub boosted_probability: f64,
    pub s_min_condition: bool,
    pub log_k_condition: bool,
    pub copies_condition: bool,
}

impl GuaranteedRate {
    pub fn preconditions_met(&self) -> bool {
        self.s_min_condition && self.log_k_condition && self.copies_condition
    }
}

/// Success probability attached to the unboosted guarantee.
pub const GUARANTEE_PROBABILITY: f64 = 2.0 / 3.0;

/// `√(64/65)`, the success probability after five repetitions.
pub fn boosted_probability() -> f64 {
    (64.0f64 / 65.0).sqrt()
}

/// The guaranteed rate figure: `min{S_min/4, log₂k/4}` with probability 2/3
/// when `S_min ≥ 13/2`, `log₂k ≥ 13/2` and `k ≤ 2^{S_min}`; out-of-regime
/// inputs still return the figure with the failing flags cleared.
pub fn guaranteed_rate(s_min: f64, k: usize) -> GuaranteedRate {
    let log_k = if k == 0 { f64::NEG_INFINITY } else { (k as f64).log2() };
    GuaranteedRate {
        s_min,
        k,
        block: 1,
        rate: (s_min / 4.0).min(log_k / 4.0).max(0.0),
        probability: GUARANTEE_PROBABILITY,
        boosted_rate: (s_min / 20.0).min(log_k / 20.0).max(0.0),
        boosted_probability: boosted_probability(),
        s_min_condition: s_min >= 6.5,
        log_k_condition: log_k >= 6.5,
        copies_condition: log_k <= s_min,
    }
}

/// The guarantee applied to blocks of `l` copies: the protocol sees
/// `⌊k/l⌋` copies of `ψ^{⊗l}` with min-entropy `l·S_min`; rates are
/// reported per original copy.
pub fn guaranteed_rate_blocked(s_min: f64, k: usize, l: usize) -> Result<GuaranteedRate> {
    if l == 0 {
        return Err(Error::domain("block size must be at least 1"));
    }
    let inner = guaranteed_rate(l as f64 * s_min, k / l);
    Ok(GuaranteedRate {
        s_min,
        k,
        block: l,
        rate: inner.rate / l as f64,
        boosted_rate: inner.boosted_rate / l as f64,
        ..inner
    })
}

/// Exact rate statistics of the protocol at `k` copies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub k: usize,
    pub spectrum: Spectrum,
    pub s_min: f64,
    pub gamma: f64,
    pub expected_ebits: f64,
    pub expected_rate: f64,
    pub thresholds: Vec<ThresholdProbability>,
    pub guaranteed: GuaranteedRate,
    pub outcomes: Vec<DistillationOutcome>,
}

pub fn rate_statistics(
    s: &Spectrum,
    k: usize,
    thresholds: &[f64],
    limits: &Limits,
) -> Result<RateReport> {
    let outcomes = distill_law(s, k, limits)?;
    let expected = expected_ebits(&outcomes);
    let s_min = renyi_entropy(s, RenyiOrder::Infinity);
    Ok(RateReport {
        k,
        spectrum: s.clone(),
        s_min,
        gamma: s.gamma(),
        expected_ebits: expected,
        expected_rate: if k == 0 { 0.0 } else { expected / k as f64 },
        thresholds: thresholds
            .iter()
            .map(|&t| ThresholdProbability { threshold: t, probability: tail_probability(&outcomes, t) })
            .collect(),
        guaranteed: guaranteed_rate(s_min, k),
        outcomes,
    })
}

/// `μ(λ)·e^{k²/γ}` with `γ = 1/max(s)`; `+∞` when it overflows.
pub fn probability_upper_bound(lambda: &Partition, s: &Spectrum, k: usize) -> f64 {
    let mu = bigrational_to_f64(&plancherel(lambda));
    mu * ((k * k) as f64 * s.max()).exp()
}

fn ln_factorial(k: usize) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

/// `e^k · e^{2ck ln k}/k! · e^{π√(2k/3)}/k^{3/4}`, the bound on the
/// probability that `dim V_λ ≤ k^{ck}`. Natural logarithms throughout.
pub fn tail_bound(k: usize, c: f64) -> f64 {
    assert!(k >= 1, "tail bound needs k ≥ 1");
    let kf = k as f64;
    let ln = kf + 2.0 * c * kf * kf.ln() - ln_factorial(k) + std::f64::consts::PI * (2.0 * kf / 3.0).sqrt()
        - 0.75 * kf.ln();
    ln.exp()
}

/// Exact `Pr(dim V_λ ≤ k^{ck})` under the law of `s`.
pub fn exact_tail(s: &Spectrum, k: usize, c: f64, limits: &Limits) -> Result<f64> {
    let cutoff = c * k as f64 * (k as f64).log2();
    Ok(distill_law(s, k, limits)?
        .iter()
        .filter(|o| o.ebits <= cutoff + 1e-12)
        .map(|o| o.probability)
        .sum())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominanceRow {
    pub ebits: f64,
    pub tail_k: f64,
    pub tail_k_plus_one: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub k: usize,
    pub holds: bool,
    /// Largest `Pr_k(ebits ≥ t) − Pr_{k+1}(ebits ≥ t)` over the joint
    /// support (non-positive when dominance is strict).
    pub max_violation: f64,
    pub rows: Vec<DominanceRow>,
}

/// Slack allowed in the dominance comparison.
pub const DOMINANCE_SLACK: f64 = 1e-10;

/// Checks `Pr_{k+1}(ebits ≥ t) ≥ Pr_k(ebits ≥ t) − 1e−10` at every ebit
/// value `t` in the joint support. Thresholds compare `dim V_λ` exactly.
pub fn dominance_check(s: &Spectrum, k: usize, limits: &Limits) -> Result<DominanceReport> {
    let a = distill_law(s, k, limits)?;
    let b = distill_law(s, k + 1, limits)?;
    let mut dims: Vec<&BigUint> = a.iter().chain(b.iter()).map(|o| &o.dim_v).collect();
    dims.sort();
    dims.dedup();
    let tail = |law: &[DistillationOutcome], d: &BigUint| -> f64 {
        law.iter().filter(|o| &o.dim_v >= d).map(|o| o.probability).sum()
    };
    let mut rows = Vec::with_capacity(dims.len());
    let mut worst = f64::NEG_INFINITY;
    for d in dims {
        let (ta, tb) = (tail(&a, d), tail(&b, d));
        worst = worst.max(ta - tb);
        rows.push(DominanceRow { ebits: log2_biguint(d), tail_k: ta, tail_k_plus_one: tb });
    }
    Ok(DominanceReport { k, holds: worst <= DOMINANCE_SLACK, max_violation: worst, rows })
}
