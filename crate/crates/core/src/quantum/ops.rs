use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::state::{BipartiteState, DensityOperator, Spectrum};
use crate::error::{Error, Result};

/// Eigen-decomposition of a Hermitian matrix, eigenvalues in non-increasing
/// order with matching eigenvector columns.
///
/// Takes the real symmetric path when every imaginary part is exactly zero.
pub fn hermitian_eigen(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let n = m.nrows();
    let (vals, vecs) = if m.iter().all(|c| c.im == 0.0) {
        let re = m.map(|c| c.re);
        let eig = SymmetricEigen::new(re);
        (eig.eigenvalues.as_slice().to_vec(), eig.eigenvectors.map(|x| C64::new(x, 0.0)))
    } else {
        let eig = SymmetricEigen::new(m.clone());
        (eig.eigenvalues.as_slice().to_vec(), eig.eigenvectors)
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
    let sorted_vals = order.iter().map(|&i| vals[i]).collect();
    let sorted_vecs = DMatrix::from_fn(n, n, |r, c| vecs[(r, order[c])]);
    (sorted_vals, sorted_vecs)
}

/// `Σ |λ_i|` for a Hermitian matrix.
pub fn trace_norm_hermitian(m: &DMatrix<C64>) -> f64 {
    let (vals, _) = hermitian_eigen(m);
    vals.iter().map(|v| v.abs()).sum()
}

/// Traces out every factor not listed in `keep` (strictly increasing factor
/// indices). Keeping nothing yields the `1×1` operator `[tr ρ]`.
pub fn partial_trace(rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
    let dims = rho.dims();
    if keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::domain(format!(
            "subsystem index out of range: keep {keep:?} with {} factors",
            dims.len()
        )));
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain(format!("keep indices must be strictly increasing: {keep:?}")));
    }
    let n = dims.len();
    let kept_dims: Vec<usize> = keep.iter().map(|&i| dims[i]).collect();
    let dk: usize = kept_dims.iter().product();
    let dt: usize = rho.dim() / dk;
    let is_kept: Vec<bool> = (0..n).map(|i| keep.contains(&i)).collect();

    // for every full index, its (kept, traced) coordinates
    let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::with_capacity(dk); dt];
    for full in 0..rho.dim() {
        let mut rem = full;
        let mut digits = vec![0; n];
        for f in (0..n).rev() {
            digits[f] = rem % dims[f];
            rem /= dims[f];
        }
        let (mut kept, mut traced) = (0, 0);
        for f in 0..n {
            if is_kept[f] {
                kept = kept * dims[f] + digits[f];
            } else {
                traced = traced * dims[f] + digits[f];
            }
        }
        groups[traced].push((kept, full));
    }
    let m = rho.matrix();
    let mut out = DMatrix::<C64>::zeros(dk, dk);
    for g in &groups {
        for &(ki, fi) in g {
            for &(kj, fj) in g {
                out[(ki, kj)] += m[(fi, fj)];
            }
        }
    }
    Ok(DensityOperator::from_parts_trusted(out, kept_dims))
}

/// Schmidt data: squared coefficients and the matching local vectors as
/// matrix columns, so that `ψ = Σ_i √p_i |a_i⟩|b_i⟩`.
#[derive(Clone, Debug)]
pub struct Schmidt {
    pub spectrum: Spectrum,
    pub basis_a: DMatrix<C64>,
    pub basis_b: DMatrix<C64>,
}

pub fn schmidt(psi: &BipartiteState) -> Schmidt {
    let c = psi.coefficients();
    let svd = c.svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^T");
    let s = svd.singular_values;
    let r = s.len();
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]));
    let basis_a = DMatrix::from_fn(u.nrows(), r, |row, col| u[(row, order[col])]);
    // C = U Σ V†, so b_i has components V†[i, b]
    let basis_b = DMatrix::from_fn(v_t.ncols(), r, |row, col| v_t[(order[col], row)]);
    let probs: Vec<f64> = order.iter().map(|&i| s[i] * s[i]).collect();
    Schmidt { spectrum: Spectrum::from_eigenvalues(probs), basis_a, basis_b }
}

/// Order `α` of a Rényi entropy, with the three limits named.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RenyiOrder {
    Zero,
    One,
    Infinity,
    Alpha(f64),
}

/// `S_α` in bits, evaluated on the numerical support so that every order
/// sees the same eigenvalues as `S_0`.
pub fn renyi_entropy(s: &Spectrum, alpha: RenyiOrder) -> f64 {
    let p = s.support();
    let order = match alpha {
        RenyiOrder::Alpha(0.0) => RenyiOrder::Zero,
        RenyiOrder::Alpha(1.0) => RenyiOrder::One,
        RenyiOrder::Alpha(a) if a == f64::INFINITY => RenyiOrder::Infinity,
        other => other,
    };
    let value = match order {
        RenyiOrder::Zero => (s.rank() as f64).log2(),
        RenyiOrder::One => -p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.log2()).sum::<f64>(),
        RenyiOrder::Infinity => -s.max().log2(),
        RenyiOrder::Alpha(a) => {
            let sum: f64 = p.iter().filter(|&&x| x > 0.0).map(|&x| x.powf(a)).sum();
            sum.log2() / (1.0 - a)
        }
    };
    value.max(0.0)
}

fn same_dim(rho: &DensityOperator, sigma: &DensityOperator) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::domain(format!(
            "dimension mismatch: {} vs {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    Ok(())
}

/// `½‖ρ − σ‖₁`.
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    same_dim(rho, sigma)?;
    let diff = rho.matrix() - sigma.matrix();
    Ok((0.5 * trace_norm_hermitian(&diff)).clamp(0.0, 1.0))
}

/// `‖√ρ √σ‖₁²`.
pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    same_dim(rho, sigma)?;
    // singular values rather than eigenvalues of √ρσ√ρ: eigenvalue noise
    // near zero would otherwise enter through a square root
    let product = psd_sqrt(rho.matrix()) * psd_sqrt(sigma.matrix());
    let root: f64 = product.singular_values().iter().sum();
    Ok((root * root).clamp(0.0, 1.0))
}

fn psd_sqrt(m: &DMatrix<C64>) -> DMatrix<C64> {
    let (vals, vecs) = hermitian_eigen(m);
    let mut scaled = vecs.clone();
    for (j, v) in vals.iter().enumerate() {
        let r = v.max(0.0).sqrt();
        scaled.column_mut(j).scale_mut(r);
    }
    scaled * vecs.adjoint()
}

/// `h₂(η)` in bits with `0·log 0 = 0`.
pub fn binary_entropy(eta: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(eta) + term(1.0 - eta)
}
