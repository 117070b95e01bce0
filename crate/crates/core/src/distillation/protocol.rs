use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::partitions::Partition;
use crate::quantum::{BipartiteState, C64};
use crate::sampling::{sample_index, trial_rng};
use crate::schur_weyl::{iid_coefficients, schur_block_basis};

/// Result of one protocol run: the measured label and a certificate for
/// the extracted state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolRun {
    pub lambda: Partition,
    pub ebits: f64,
    pub probability: f64,
    /// Fidelity of the kept `V_λ^A ⊗ V_λ^B` state with the maximally
    /// entangled state of dimension `dim V_λ`.
    pub fidelity: f64,
}

#[derive(Clone, Debug)]
struct Branch {
    lambda: Partition,
    dim_v: usize,
    probability: f64,
    fidelity: f64,
}

/// Dense simulation of the protocol on `ψ^{⊗k}`: each branch is projected,
/// rotated into the Schur block basis, the `U_λ` factors are traced out and
/// the `V_λ` pair is compared with `|φ⁺⟩`. Branches are computed once and
/// reused across draws.
#[derive(Clone, Debug)]
pub struct ProtocolSimulator {
    pub k: usize,
    branches: Vec<Branch>,
}

impl ProtocolSimulator {
    pub fn new(psi: &BipartiteState, k: usize, limits: &Limits) -> Result<Self> {
        let (da, db) = (psi.dim_a(), psi.dim_b());
        let total = (da as u128).pow(k as u32) * (db as u128).pow(k as u32);
        if total > limits.dense_dim as u128 {
            return Err(Error::capacity("protocol simulation", total, limits.dense_dim as u128));
        }
        let basis_a = schur_block_basis(da, k, limits)?;
        let basis_b = if db == da { basis_a.clone() } else { schur_block_basis(db, k, limits)? };
        let m = iid_coefficients(psi, k);
        let mut branches = Vec::new();
        for block in &basis_a.blocks {
            let wa = block.isometry.map(|x| C64::new(x, 0.0));
            let left = wa.transpose() * &m;
            let dim_v = block.dim_v;
            let (probability, fidelity) = match basis_b.block(&block.lambda) {
                None => (left.norm_squared(), 0.0),
                Some(bb) => {
                    let wb = bb.isometry.map(|x| C64::new(x, 0.0));
                    let kk = &left * wb;
                    let p = kk.norm_squared();
                    let f = if p > 0.0 {
                        maximally_entangled_fidelity(&kk, block.dim_u, bb.dim_u, dim_v, p)
                    } else {
                        0.0
                    };
                    (p, f)
                }
            };
            branches.push(Branch { lambda: block.lambda.clone(), dim_v, probability, fidelity });
        }
        Ok(ProtocolSimulator { k, branches })
    }

    /// Branch probabilities in canonical partition order.
    pub fn probabilities(&self) -> Vec<(Partition, f64)> {
        self.branches.iter().map(|b| (b.lambda.clone(), b.probability)).collect()
    }

    pub fn run<R: Rng + ?Sized>(&self, rng: &mut R) -> ProtocolRun {
        let probs: Vec<f64> = self.branches.iter().map(|b| b.probability).collect();
        let b = &self.branches[sample_index(&probs, rng)];
        ProtocolRun {
            lambda: b.lambda.clone(),
            ebits: (b.dim_v as f64).log2(),
            probability: b.probability,
            fidelity: b.fidelity,
        }
    }

    /// `trials` runs, trial `i` drawn from [`trial_rng`]`(seed, i)`.
    pub fn run_many(&self, seed: u64, trials: u64) -> Vec<ProtocolRun> {
        (0..trials).map(|i| self.run(&mut trial_rng(seed, i))).collect()
    }
}

/// `⟨φ⁺|ρ_VV|φ⁺⟩` where `ρ_VV = tr_{U_A U_B}(K K†)/p` and `K` is the
/// branch in Schur coordinates, rows `(a, i)`, columns `(b, j)`.
fn maximally_entangled_fidelity(kk: &DMatrix<C64>, ua: usize, ub: usize, dv: usize, p: f64) -> f64 {
    let mut rho = DMatrix::<C64>::zeros(dv * dv, dv * dv);
    for a in 0..ua {
        for b in 0..ub {
            let vec: Vec<C64> = (0..dv * dv).map(|ij| kk[(a * dv + ij / dv, b * dv + ij % dv)]).collect();
            for (r, x) in vec.iter().enumerate() {
                for (c, y) in vec.iter().enumerate() {
                    rho[(r, c)] += x * y.conj();
                }
            }
        }
    }
    let mut f = C64::new(0.0, 0.0);
    for i in 0..dv {
        for j in 0..dv {
            f += rho[(i * dv + i, j * dv + j)];
        }
    }
    f.re / (dv as f64 * p)
}

/// Builds a simulator and draws one outcome.
pub fn run_protocol<R: Rng + ?Sized>(
    psi: &BipartiteState,
    k: usize,
    rng: &mut R,
    limits: &Limits,
) -> Result<ProtocolRun> {
    Ok(ProtocolSimulator::new(psi, k, limits)?.run(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distillation::distill_law;

    fn two_level(p: f64) -> BipartiteState {
        let z = C64::new(0.0, 0.0);
        BipartiteState::from_amplitudes(vec![C64::new(p.sqrt(), 0.0), z, z, C64::new((1.0 - p).sqrt(), 0.0)], 1, 1)
            .unwrap()
    }

    #[test]
    fn bell_three_copies() {
        let sim = ProtocolSimulator::new(&two_level(0.5), 3, &Limits::default()).unwrap();
        let runs = sim.run_many(11, 200);
        assert!(runs.iter().any(|r| r.lambda == Partition::new(vec![2, 1]).unwrap()));
        for r in &runs {
            assert!(r.fidelity >= 1.0 - 1e-8, "fidelity {}", r.fidelity);
        }
        let first = run_protocol(&two_level(0.5), 3, &mut trial_rng(11, 0), &Limits::default()).unwrap();
        assert_eq!(first, runs[0]);
    }

    #[test]
    fn product_input_gives_nothing() {
        let sim = ProtocolSimulator::new(&two_level(1.0), 3, &Limits::default()).unwrap();
        for r in sim.run_many(1, 10) {
            assert_eq!(r.lambda, Partition::row(3));
            assert_eq!(r.ebits, 0.0);
            assert!((r.fidelity - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn branch_probabilities_match_law() {
        let psi = two_level(0.9);
        let sim = ProtocolSimulator::new(&psi, 4, &Limits::default()).unwrap();
        let law = distill_law(&psi.spectrum_a(), 4, &Limits::default()).unwrap();
        for (lambda, p) in sim.probabilities() {
            let q = law.iter().find(|o| o.lambda == lambda).map_or(0.0, |o| o.probability);
            assert!((p - q).abs() < 1e-10);
        }
    }
}
