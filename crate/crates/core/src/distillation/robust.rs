use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::partitions::{enumerate_partitions, Partition};
use crate::quantum::{BipartiteState, DensityOperator, C64};
use crate::sampling::sample_index;
use crate::schur_weyl::irrep_projector;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointEntry {
    pub lambda_a: Partition,
    pub lambda_b: Partition,
    pub prob: f64,
}

/// The joint outcome law `tr[(Π_{λ_A} ⊗ Π_{λ_B}) ρ_k]` of the two local
/// weak Schur measurements.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointLaw {
    pub k: usize,
    pub dim_a: usize,
    pub dim_b: usize,
    pub entries: Vec<JointEntry>,
}

impl JointLaw {
    /// Total mass on `λ_A ≠ λ_B`.
    pub fn abort_probability(&self) -> f64 {
        self.entries.iter().filter(|e| e.lambda_a != e.lambda_b).map(|e| e.prob).sum()
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.prob).sum()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> JointSample {
        let probs: Vec<f64> = self.entries.iter().map(|e| e.prob).collect();
        let e = &self.entries[sample_index(&probs, rng)];
        JointSample {
            lambda_a: e.lambda_a.clone(),
            lambda_b: e.lambda_b.clone(),
            abort: e.lambda_a != e.lambda_b,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointSample {
    pub lambda_a: Partition,
    pub lambda_b: Partition,
    pub abort: bool,
}

/// Reads `(d_A, d_B, k)` off interleaved factor dims `[d_A, d_B, d_A, ...]`.
fn interleaved_shape(dims: &[usize]) -> Result<(usize, usize, usize)> {
    if dims.is_empty() || !dims.len().is_multiple_of(2) {
        return Err(Error::domain("expected factor dims [d_A, d_B] repeated k times"));
    }
    let (da, db) = (dims[0], dims[1]);
    if dims.chunks(2).any(|c| c[0] != da || c[1] != db) {
        return Err(Error::domain("factor dims are not an (A B)^k pattern"));
    }
    Ok((da, db, dims.len() / 2))
}

/// Joint law of `ρ_k` given on `(A B)^{⊗k}` in interleaved factor order.
pub fn joint_law(rho_k: &DensityOperator, limits: &Limits) -> Result<JointLaw> {
    let (da, db, k) = interleaved_shape(rho_k.dims())?;
    let na = limits.check_dense("joint two-sided law", da, k)?;
    let nb = limits.check_dense("joint two-sided law", db, k)?;
    let total = (na as u128) * (nb as u128);
    if total > limits.dense_dim as u128 {
        return Err(Error::capacity("joint two-sided law", total, limits.dense_dim as u128));
    }

    // index in A^k B^k order -> interleaved index
    let to_interleaved: Vec<usize> = (0..na * nb)
        .map(|idx| {
            let (mut x, mut y) = (idx / nb, idx % nb);
            let mut digits = vec![0usize; 2 * k];
            for j in (0..k).rev() {
                digits[2 * j] = x % da;
                digits[2 * j + 1] = y % db;
                x /= da;
                y /= db;
            }
            digits.iter().zip(rho_k.dims()).fold(0, |acc, (&g, &d)| acc * d + g)
        })
        .collect();
    let m = rho_k.matrix();
    let r = |x: usize, y: usize, xp: usize, yp: usize| m[(to_interleaved[x * nb + y], to_interleaved[xp * nb + yp])];

    let proj_a: Vec<_> = enumerate_partitions(k, da.min(k))?
        .iter()
        .map(|l| irrep_projector(l, da, limits))
        .collect::<Result<_>>()?;
    let proj_b: Vec<_> = enumerate_partitions(k, db.min(k))?
        .iter()
        .map(|l| irrep_projector(l, db, limits))
        .collect::<Result<_>>()?;

    let mut entries = Vec::new();
    for pa in &proj_a {
        // S[y, y'] = Σ_{x,x'} Π_A[x', x] R[(x,y),(x',y')]
        let mut s = DMatrix::<C64>::zeros(nb, nb);
        for x in 0..na {
            for xp in 0..na {
                let w = pa.matrix[(xp, x)];
                if w == 0.0 {
                    continue;
                }
                for y in 0..nb {
                    for yp in 0..nb {
                        s[(y, yp)] += r(x, y, xp, yp) * w;
                    }
                }
            }
        }
        for pb in &proj_b {
            let mut p = 0.0;
            for y in 0..nb {
                for yp in 0..nb {
                    p += pb.matrix[(yp, y)] * s[(y, yp)].re;
                }
            }
            entries.push(JointEntry {
                lambda_a: pa.lambda.clone(),
                lambda_b: pb.lambda.clone(),
                prob: p.max(0.0),
            });
        }
    }
    Ok(JointLaw { k, dim_a: da, dim_b: db, entries })
}

/// One draw of the two-sided protocol: both parties measure their weak
/// Schur label and abort on disagreement.
pub fn joint_two_sided_sample<R: Rng + ?Sized>(
    rho_k: &DensityOperator,
    rng: &mut R,
    limits: &Limits,
) -> Result<JointSample> {
    Ok(joint_law(rho_k, limits)?.sample(rng))
}

/// `(1 − δ) ψ^{⊗k} + δ I/D` on `(A B)^{⊗k}` in interleaved order.
pub fn perturbed_iid(psi: &BipartiteState, k: usize, delta: f64) -> Result<DensityOperator> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::domain(format!("mixing weight {delta} outside [0, 1]")));
    }
    let pure = psi.state.density().tensor_power(k);
    let dims = pure.dims().to_vec();
    let dim = pure.dim();
    let m = pure.into_matrix() * C64::new(1.0 - delta, 0.0)
        + DMatrix::<C64>::identity(dim, dim) * C64::new(delta / dim as f64, 0.0);
    Ok(DensityOperator::from_parts_trusted(m, dims))
}
