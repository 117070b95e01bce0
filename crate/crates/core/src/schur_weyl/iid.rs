use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::basis::{schur_block_basis, SchurBlockBasis};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::partitions::Partition;
use crate::quantum::{hermitian_eigen, BipartiteState};

/// Cluster tolerance for eigenvalue multiplicities (relative to `Pr(λ)`).
pub const CLUSTER_TOLERANCE: f64 = 1e-8;
/// Outcomes with probability at or below this are not examined.
pub const MIN_REPORTED_PROBABILITY: f64 = 1e-12;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IidLambdaReport {
    pub lambda: Partition,
    pub probability: f64,
    pub dim_v: usize,
    pub ebits: f64,
    /// Largest `tr[(Π_λ^A ⊗ Π_{λ'}^B) ψ^{⊗k}]` over `λ' ≠ λ`.
    pub cross_mass: f64,
    /// Sizes of the nonzero eigenvalue clusters of the projected reduced
    /// state on `A^k`.
    pub cluster_sizes: Vec<usize>,
    pub multiplicities_divisible: bool,
    /// Fidelity of the `V_λ^A V_λ^B` marginal with the maximally entangled
    /// state of dimension `dim V_λ`.
    pub fidelity: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IidReport {
    pub k: usize,
    pub entries: Vec<IidLambdaReport>,
}

impl IidReport {
    pub fn max_cross_mass(&self) -> f64 {
        self.entries.iter().map(|e| e.cross_mass).fold(0.0, f64::max)
    }

    pub fn min_fidelity(&self) -> f64 {
        self.entries.iter().map(|e| e.fidelity).fold(1.0, f64::min)
    }

    /// Cross mass `≤ 1e−10`, divisible multiplicities and fidelity
    /// `≥ 1 − 1e−8` for every examined `λ`.
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| {
            e.cross_mass <= 1e-10 && e.multiplicities_divisible && e.fidelity >= 1.0 - 1e-8
        })
    }
}

/// Coefficient matrix of `ψ^{⊗k}` reordered as `A^k | B^k`: the
/// Kronecker power `C^{⊗k}`.
pub fn iid_coefficients(psi: &BipartiteState, k: usize) -> DMatrix<C64> {
    let c = psi.coefficients();
    let mut m = DMatrix::from_element(1, 1, C64::new(1.0, 0.0));
    for _ in 0..k {
        m = m.kronecker(&c);
    }
    m
}

fn real_to_complex(m: &DMatrix<f64>) -> DMatrix<C64> {
    m.map(|x| C64::new(x, 0.0))
}

/// Checks the structure of `ψ^{⊗k}` in the Schur basis: labels agree on
/// both sides, the reduced state is degenerate in `V_λ`, and the `V_λ`
/// factors carry a maximally entangled state.
///
/// Both sides use the same Young-orthogonal-form gauge, in which the local
/// `V_λ` rotations are the identity; the reported fidelity is taken in that
/// gauge.
pub fn verify_iid_decomposition(
    psi: &BipartiteState,
    k: usize,
    limits: &Limits,
) -> Result<IidReport> {
    let (da, db) = (psi.dim_a(), psi.dim_b());
    let total = (da as u128).pow(k as u32) * (db as u128).pow(k as u32);
    if total > limits.dense_dim as u128 {
        return Err(Error::capacity("iid decomposition", total, limits.dense_dim as u128));
    }
    let basis_a = schur_block_basis(da, k, limits)?;
    let basis_b = if db == da { basis_a.clone() } else { schur_block_basis(db, k, limits)? };
    let m = iid_coefficients(psi, k);
    verify_with_bases(&m, &basis_a, &basis_b, k)
}

fn verify_with_bases(
    m: &DMatrix<C64>,
    basis_a: &SchurBlockBasis,
    basis_b: &SchurBlockBasis,
    k: usize,
) -> Result<IidReport> {
    let wb: Vec<DMatrix<C64>> = basis_b.blocks.iter().map(|b| real_to_complex(&b.isometry)).collect();
    let mut entries = Vec::new();
    for block in &basis_a.blocks {
        let wa = real_to_complex(&block.isometry);
        let left = wa.adjoint() * m;
        let probability = left.norm_squared();
        if probability <= MIN_REPORTED_PROBABILITY {
            continue;
        }
        let mut cross_mass: f64 = 0.0;
        let mut k_mat = None;
        for (bb, w) in basis_b.blocks.iter().zip(&wb) {
            let kk = &left * w;
            if bb.lambda == block.lambda {
                k_mat = Some(kk);
            } else {
                cross_mass = cross_mass.max(kk.norm_squared());
            }
        }
        let dim_v = block.dim_v;
        let Some(kk) = k_mat else {
            return Err(Error::domain(format!(
                "label {} has mass {probability} on A but no block on B",
                block.lambda
            )));
        };

        // eigenvalues of K K† are the nonzero spectrum of Π M M† Π
        let gram = &kk * kk.adjoint();
        let (vals, _) = hermitian_eigen(&gram);
        let cluster_sizes = clusters(&vals, probability);
        let multiplicities_divisible = cluster_sizes.iter().all(|c| c % dim_v == 0);

        // V-marginal overlap with Σ_i |i⟩|i⟩/√dim V
        let (ua, ub) = (block.dim_u, basis_b.block(&block.lambda).map_or(0, |b| b.dim_u));
        let mut overlap = 0.0;
        for a in 0..ua {
            for b in 0..ub {
                let mut s = C64::new(0.0, 0.0);
                for i in 0..dim_v {
                    s += kk[(a * dim_v + i, b * dim_v + i)];
                }
                overlap += s.norm_sqr();
            }
        }
        let fidelity = overlap / (dim_v as f64 * probability);
        entries.push(IidLambdaReport {
            lambda: block.lambda.clone(),
            probability,
            dim_v,
            ebits: (dim_v as f64).log2(),
            cross_mass,
            cluster_sizes,
            multiplicities_divisible,
            fidelity,
        });
    }
    Ok(IidReport { k, entries })
}

// Group sorted (descending) eigenvalues into clusters of nearly equal value,
// ignoring those numerically zero.
fn clusters(vals: &[f64], scale: f64) -> Vec<usize> {
    let tol = CLUSTER_TOLERANCE * scale;
    let floor = 1e-10 * scale;
    let mut out = Vec::new();
    let mut i = 0;
    while i < vals.len() && vals[i] > floor {
        let mut j = i + 1;
        while j < vals.len() && vals[j] > floor && (vals[i] - vals[j]).abs() <= tol {
            j += 1;
        }
        out.push(j - i);
        i = j;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::haar_state;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn bell_pair_k2() {
        let h = 0.5f64.sqrt();
        let c = |x: f64| C64::new(x, 0.0);
        let bell = BipartiteState::from_amplitudes(vec![c(h), c(0.0), c(0.0), c(h)], 1, 1).unwrap();
        let r = verify_iid_decomposition(&bell, 2, &Limits::default()).unwrap();
        assert_eq!(r.entries.len(), 2);
        assert!((r.entries[0].probability - 0.75).abs() < 1e-12);
        assert_eq!(r.entries[0].lambda, p(&[2]));
        assert!((r.entries[1].probability - 0.25).abs() < 1e-12);
        assert!(r.entries.iter().all(|e| e.ebits == 0.0));
        assert!(r.passed());
        assert!(r.max_cross_mass() < 1e-15);
    }

    #[test]
    fn product_state_only_trivial_irrep() {
        let c = |x: f64| C64::new(x, 0.0);
        let prod = BipartiteState::from_amplitudes(vec![c(0.0), c(1.0), c(0.0), c(0.0)], 1, 1).unwrap();
        let r = verify_iid_decomposition(&prod, 3, &Limits::default()).unwrap();
        assert_eq!(r.entries.len(), 1);
        assert_eq!(r.entries[0].lambda, p(&[3]));
        assert!(r.passed());
    }

    #[test]
    fn random_two_qubit_state_k3() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let psi = BipartiteState::new(haar_state(4, &mut rng), 1, 1).unwrap();
        let r = verify_iid_decomposition(&psi, 3, &Limits::default()).unwrap();
        let mixed = r.entries.iter().find(|e| e.lambda == p(&[2, 1])).unwrap();
        assert!(mixed.cluster_sizes.iter().all(|&c| c == 2));
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn cap_is_enforced() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let psi = BipartiteState::new(haar_state(16, &mut rng), 2, 2).unwrap();
        let err = verify_iid_decomposition(&psi, 4, &Limits::default()).unwrap_err();
        assert!(err.is_capacity());
    }
}
