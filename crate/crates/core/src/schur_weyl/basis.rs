use nalgebra::{DMatrix, DVector};
use num_traits::ToPrimitive;

use super::projector::permutation_index_map;
use super::young::YoungOrthogonalForm;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::partitions::{dim_unitary_irrep, enumerate_partitions, factorial, Partition};
use crate::permutation::{all_permutations, Permutation};

/// Largest `k` accepted by [`schur_block_basis`].
pub const MAX_BLOCK_BASIS_K: usize = 5;

/// One isotypic block: an isometry `W` from `U_λ ⊗ V_λ` into
/// `(ℂ^d)^{⊗k}` with `Wᵀ R_π W = I_U ⊗ ρ_λ(π)`.
///
/// Column `a·dim V + i` is the `a`-th vector of `U_λ` tensored with the
/// `i`-th standard tableau of `V_λ`.
#[derive(Clone, Debug)]
pub struct SchurBlock {
    pub lambda: Partition,
    pub dim_u: usize,
    pub dim_v: usize,
    pub irrep: YoungOrthogonalForm,
    pub isometry: DMatrix<f64>,
}

impl SchurBlock {
    /// `W Wᵀ`, the block's isotypic projector.
    pub fn projector(&self) -> DMatrix<f64> {
        &self.isometry * self.isometry.transpose()
    }

    /// `max |Wᵀ R_π W − I ⊗ ρ(π)|`.
    pub fn block_form_error(&self, pi: &Permutation, d: usize) -> f64 {
        let map = permutation_index_map(pi, d);
        let w = &self.isometry;
        let mut rw = DMatrix::<f64>::zeros(w.nrows(), w.ncols());
        for (x, &y) in map.iter().enumerate() {
            rw.row_mut(y).copy_from(&w.row(x));
        }
        let conj = w.transpose() * rw;
        let rho = self.irrep.matrix(pi);
        let expected = DMatrix::<f64>::identity(self.dim_u, self.dim_u).kronecker(&rho);
        (conj - expected).abs().max()
    }
}

/// The Schur basis of `(ℂ^d)^{⊗k}`, one block per `λ ⊢ k` with at most `d`
/// rows, in canonical partition order.
#[derive(Clone, Debug)]
pub struct SchurBlockBasis {
    pub d: usize,
    pub k: usize,
    pub blocks: Vec<SchurBlock>,
}

impl SchurBlockBasis {
    pub fn block(&self, lambda: &Partition) -> Option<&SchurBlock> {
        self.blocks.iter().find(|b| &b.lambda == lambda)
    }

    /// All block isometries side by side: an orthogonal `d^k × d^k` matrix.
    pub fn full_matrix(&self) -> DMatrix<f64> {
        let cols: Vec<_> = self.blocks.iter().map(|b| b.isometry.clone()).collect();
        let n = self.d.pow(self.k as u32);
        let mut m = DMatrix::<f64>::zeros(n, n);
        let mut at = 0;
        for c in cols {
            m.columns_mut(at, c.ncols()).copy_from(&c);
            at += c.ncols();
        }
        m
    }
}

/// Builds the block basis from matrix units
/// `E_ij = (dim V/k!) Σ_π ρ(π)_ij R_π` of Young's orthogonal form: an
/// orthonormal basis `u_a` of `range(E_00)` is transported to
/// `w_{a,i} = E_{i0} u_a`.
pub fn schur_block_basis(d: usize, k: usize, limits: &Limits) -> Result<SchurBlockBasis> {
    if k > MAX_BLOCK_BASIS_K {
        return Err(Error::capacity("Schur block basis k", k as u128, MAX_BLOCK_BASIS_K as u128));
    }
    if d == 0 {
        return Err(Error::domain("local dimension must be positive"));
    }
    let dim = limits.check_dense("Schur block basis", d, k)?;
    let perms = all_permutations(k);
    let maps: Vec<Vec<usize>> = perms.iter().map(|p| permutation_index_map(p, d)).collect();
    let kfact = factorial(k).to_f64().expect("small factorial");
    let mut blocks = Vec::new();
    for lambda in enumerate_partitions(k, d.min(k).max(1))? {
        let irrep = YoungOrthogonalForm::new(&lambda);
        let dim_v = irrep.dim();
        let dim_u = dim_unitary_irrep(&lambda, d)?.to_usize().expect("fits dense cap");
        let reps: Vec<DMatrix<f64>> = perms.iter().map(|p| irrep.matrix(p)).collect();
        let scale = dim_v as f64 / kfact;

        // E_00 as a dense matrix
        let mut e00 = DMatrix::<f64>::zeros(dim, dim);
        for (map, rho) in maps.iter().zip(&reps) {
            let w = scale * rho[(0, 0)];
            if w == 0.0 {
                continue;
            }
            for (x, &y) in map.iter().enumerate() {
                e00[(y, x)] += w;
            }
        }
        let us = orthonormal_range(&e00, dim_u)?;

        let mut isometry = DMatrix::<f64>::zeros(dim, dim_u * dim_v);
        for (a, u) in us.iter().enumerate() {
            for i in 0..dim_v {
                let mut w = DVector::<f64>::zeros(dim);
                for (map, rho) in maps.iter().zip(&reps) {
                    let c = scale * rho[(i, 0)];
                    if c == 0.0 {
                        continue;
                    }
                    for (x, &y) in map.iter().enumerate() {
                        w[y] += c * u[x];
                    }
                }
                isometry.set_column(a * dim_v + i, &w);
            }
        }
        blocks.push(SchurBlock { lambda, dim_u, dim_v, irrep, isometry });
    }
    Ok(SchurBlockBasis { d, k, blocks })
}

// Greedy Gram–Schmidt over the columns of a projector, with one
// reorthogonalization pass, keeping the `rank` most independent columns.
fn orthonormal_range(p: &DMatrix<f64>, rank: usize) -> Result<Vec<DVector<f64>>> {
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(rank);
    let mut residuals: Vec<DVector<f64>> = p.column_iter().map(|c| c.into_owned()).collect();
    while basis.len() < rank {
        let (best, norm) = residuals
            .iter()
            .enumerate()
            .map(|(i, r)| (i, r.norm()))
            .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if norm < 1e-8 {
            return Err(Error::domain(format!(
                "matrix unit range has numerical rank {} below expected {rank}",
                basis.len()
            )));
        }
        let mut q = residuals[best].unscale(norm);
        for b in &basis {
            let c = b.dot(&q);
            q.axpy(-c, b, 1.0);
        }
        let qn = q.norm();
        q.unscale_mut(qn);
        for r in residuals.iter_mut() {
            let c = q.dot(r);
            r.axpy(-c, &q, 1.0);
        }
        basis.push(q);
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schur_weyl::projector::irrep_projector;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn triplet_singlet_split() {
        let b = schur_block_basis(2, 2, &Limits::default()).unwrap();
        let sizes: Vec<usize> = b.blocks.iter().map(|x| x.isometry.ncols()).collect();
        assert_eq!(sizes, vec![3, 1]);
        let b = schur_block_basis(2, 3, &Limits::default()).unwrap();
        let shape: Vec<(usize, usize)> = b.blocks.iter().map(|x| (x.dim_u, x.dim_v)).collect();
        assert_eq!(shape, vec![(4, 1), (2, 2)]);
    }

    #[test]
    fn block_form_and_orthogonality() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (d, k) in [(2, 2), (2, 3), (3, 3), (2, 4), (3, 4), (2, 5)] {
            let basis = schur_block_basis(d, k, &Limits::default()).unwrap();
            let full = basis.full_matrix();
            let n = full.nrows();
            assert!((full.transpose() * &full - DMatrix::<f64>::identity(n, n)).abs().max() < 1e-9);
            for block in &basis.blocks {
                let proj = irrep_projector(&block.lambda, d, &Limits::default()).unwrap();
                assert!((block.projector() - proj.matrix).abs().max() < 1e-9);
                for _ in 0..20 {
                    let pi = Permutation::random(k, &mut rng);
                    assert!(block.block_form_error(&pi, d) < 1e-8, "d={d} k={k} λ={}", block.lambda);
                }
            }
        }
    }

    #[test]
    fn caps() {
        assert!(schur_block_basis(2, 6, &Limits::default()).unwrap_err().is_capacity());
        assert!(schur_block_basis(7, 5, &Limits::default()).unwrap_err().is_capacity());
    }
}
