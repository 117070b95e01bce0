use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::projector::irrep_projector;
use crate::error::Result;
use crate::limits::Limits;
use crate::partitions::{dim_symmetric_irrep, enumerate_partitions_capped, Partition};
use crate::quantum::{DensityOperator, Spectrum};
use crate::symmetric::{
    schur_polynomial_frobenius, schur_polynomial_jacobi_trudi, BranchingEvaluator,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LawEntry {
    pub lambda: Partition,
    pub prob: f64,
}

/// The weak-Schur-sampling distribution `λ ↦ tr(Π_λ ρ^{⊗k})`.
///
/// Entries follow the canonical (lexicographically decreasing) partition
/// order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchurLaw {
    pub d: usize,
    pub k: usize,
    pub spectrum: Spectrum,
    pub entries: Vec<LawEntry>,
}

impl SchurLaw {
    /// Probability of `λ`, zero when absent.
    pub fn prob(&self, lambda: &Partition) -> f64 {
        self.entries.iter().find(|e| &e.lambda == lambda).map_or(0.0, |e| e.prob)
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.prob).sum()
    }

    /// Largest absolute difference in probability over the union of
    /// supports.
    pub fn max_abs_diff(&self, other: &SchurLaw) -> f64 {
        let a = self.entries.iter().map(|e| (e.prob - other.prob(&e.lambda)).abs());
        let b = other.entries.iter().map(|e| (e.prob - self.prob(&e.lambda)).abs());
        a.chain(b).fold(0.0, f64::max)
    }
}

fn law_from(
    s: &Spectrum,
    k: usize,
    limits: &Limits,
    mut eval: impl FnMut(&Partition, &[f64]) -> Result<f64>,
) -> Result<SchurLaw> {
    let support = s.support();
    let rows = support.len().min(k).max(1);
    let mut entries = Vec::new();
    for lambda in enumerate_partitions_capped(k, rows, limits.partitions)? {
        let dim = dim_symmetric_irrep(&lambda).to_f64().unwrap_or(f64::INFINITY);
        let prob = (dim * eval(&lambda, support)?).max(0.0);
        entries.push(LawEntry { lambda, prob });
    }
    Ok(SchurLaw { d: s.len(), k, spectrum: s.clone(), entries })
}

/// `Pr(λ) = dim V_λ · s_λ(spec)`. Only partitions with at most
/// `min(k, rank)` rows appear, where the rank counts entries above
/// [`RANK_TOLERANCE`](crate::quantum::RANK_TOLERANCE).
pub fn schur_law(s: &Spectrum, k: usize, limits: &Limits) -> Result<SchurLaw> {
    let mut eval = BranchingEvaluator::new(s.support());
    law_from(s, k, limits, |l, _| Ok(eval.value(l)))
}

/// Same law with the Jacobi–Trudi determinant; accurate for small `k`
/// only, kept as an independent evaluator.
pub fn schur_law_jacobi_trudi(s: &Spectrum, k: usize, limits: &Limits) -> Result<SchurLaw> {
    law_from(s, k, limits, |l, x| Ok(schur_polynomial_jacobi_trudi(l, x)))
}

/// Same law via the class sum `(dim V_λ/k!) Σ_μ |C_μ| χ^λ(μ) p_μ`.
pub fn schur_law_via_characters(s: &Spectrum, k: usize, limits: &Limits) -> Result<SchurLaw> {
    law_from(s, k, limits, schur_polynomial_frobenius)
}

/// `tr(Π_λ ρ^{⊗k})` with explicit dense projectors, for every `λ` with at
/// most `d` rows.
pub fn schur_law_bruteforce(rho: &DensityOperator, k: usize, limits: &Limits) -> Result<SchurLaw> {
    let d = rho.dim();
    limits.check_dense("brute-force Schur law", d, k)?;
    let rk = rho.tensor_power(k);
    let m = rk.matrix();
    let mut entries = Vec::new();
    for lambda in enumerate_partitions_capped(k, d.min(k).max(1), limits.partitions)? {
        let proj = irrep_projector(&lambda, d, limits)?;
        // tr(Π ρ) = Σ_ij Π_ij ρ_ji with Π real symmetric
        let mut tr = 0.0;
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                tr += proj.matrix[(i, j)] * m[(j, i)].re;
            }
        }
        entries.push(LawEntry { lambda, prob: tr });
    }
    Ok(SchurLaw { d, k, spectrum: rho.spectrum(), entries })
}
