//! Symmetric-group characters, conjugacy classes, power sums and Schur
//! polynomial evaluation.
//!
//! Cycle types are represented by [`Partition`] values of the same weight as
//! the character label. Spectra are plain slices of probabilities here so the
//! functions work on any nonnegative vector.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::partitions::{enumerate_partitions, factorial, Partition};

/// Cycle type of a permutation: the multiset of its cycle lengths, fixed
/// points included.
pub type CycleType = Partition;

/// `z_μ = ∏_i i^{m_i} m_i!`, the order of the centralizer of a permutation
/// with cycle type `μ`.
pub fn centralizer_order(mu: &CycleType) -> BigUint {
    let mut z = BigUint::from(1u32);
    for (i, &m) in mu.multiplicities().iter().enumerate().skip(1) {
        for _ in 0..m {
            z *= BigUint::from(i);
        }
        z *= factorial(m);
    }
    z
}

/// Number of permutations with cycle type `μ`, `k!/z_μ`.
pub fn class_size(mu: &CycleType) -> BigUint {
    factorial(mu.weight()) / centralizer_order(mu)
}

/// `χ^λ(μ)` by the Murnaghan–Nakayama rule.
pub fn character(lambda: &Partition, mu: &CycleType) -> Result<i128> {
    CharacterMemo::new().character(lambda, mu)
}

/// Memoising Murnaghan–Nakayama evaluator.
///
/// Holds one table per instance; share an instance across calls for the
/// same weight to reuse intermediate rim-hook removals. Not `Sync`; use one
/// per thread.
#[derive(Default)]
pub struct CharacterMemo {
    // (beta set, cycle lengths still to remove) -> value
    inner: HashMap<(Vec<usize>, Vec<usize>), i128>,
}

impl CharacterMemo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn character(&mut self, lambda: &Partition, mu: &CycleType) -> Result<i128> {
        if lambda.weight() != mu.weight() {
            return Err(Error::domain(format!(
                "character weights differ: λ={lambda} has weight {}, μ={mu} has weight {}",
                lambda.weight(),
                mu.weight()
            )));
        }
        let r = lambda.rows();
        let betas: Vec<usize> = (0..r).map(|i| lambda.part(i) + (r - 1 - i)).collect();
        // remove the longest cycles first; fewer branches survive
        let cycles: Vec<usize> = mu.parts().iter().rev().copied().collect();
        self.eval(betas, &cycles)
    }

    // `betas` strictly decreasing; `cycles` consumed from the back.
    fn eval(&mut self, betas: Vec<usize>, cycles: &[usize]) -> Result<i128> {
        let Some((&m, rest)) = cycles.split_last() else {
            return Ok(1);
        };
        let key = (betas, cycles.to_vec());
        if let Some(&v) = self.inner.get(&key) {
            return Ok(v);
        }
        let betas = &key.0;
        let mut total: i128 = 0;
        for (idx, &b) in betas.iter().enumerate() {
            if b < m {
                continue;
            }
            let target = b - m;
            if betas.contains(&target) {
                continue;
            }
            // betas strictly between target and b sit after idx in the
            // decreasing list
            let between = betas[idx + 1..].iter().take_while(|&&x| x > target).count();
            let mut next = betas.clone();
            next[idx] = target;
            next.sort_unstable_by(|a, b| b.cmp(a));
            let v = self.eval(next, rest)?;
            let signed = if between % 2 == 0 { v } else { -v };
            total = total
                .checked_add(signed)
                .ok_or_else(|| Error::capacity("character value", u128::MAX, i128::MAX as u128))?;
        }
        self.inner.insert(key, total);
        Ok(total)
    }
}

/// `p_μ(x) = ∏_i Σ_j x_j^{μ_i}`.
pub fn power_sum(mu: &CycleType, x: &[f64]) -> f64 {
    mu.parts()
        .iter()
        .map(|&len| x.iter().map(|&v| v.powi(len as i32)).sum::<f64>())
        .product()
}

/// Complete homogeneous symmetric polynomials `h_0..=h_m` at `x`, from the
/// Newton identity `m·h_m = Σ_{i=1}^m p_i h_{m−i}`.
pub fn complete_homogeneous(m: usize, x: &[f64]) -> Vec<f64> {
    let p: Vec<f64> = (0..=m)
        .map(|i| if i == 0 { 0.0 } else { x.iter().map(|&v| v.powi(i as i32)).sum() })
        .collect();
    let mut h = vec![0.0; m + 1];
    h[0] = 1.0;
    for n in 1..=m {
        let s: f64 = (1..=n).map(|i| p[i] * h[n - i]).sum();
        h[n] = s / n as f64;
    }
    h
}

fn nonzero_count(x: &[f64]) -> usize {
    x.iter().filter(|&&v| v != 0.0).count()
}

/// Schur polynomial `s_λ(x)` by the branching rule
/// `s_λ(x_1..x_n) = Σ_μ x_n^{|λ|−|μ|} s_μ(x_1..x_{n−1})` over partitions `μ`
/// interlacing `λ`.
///
/// Every term is nonnegative, so the evaluation stays accurate at large
/// `k` where the determinant forms cancel catastrophically. Returns exactly
/// `0.0` when `λ` has more rows than `x` has nonzero entries.
pub fn schur_polynomial(lambda: &Partition, x: &[f64]) -> f64 {
    BranchingEvaluator::new(x).value(lambda)
}

/// Memoised branching-rule evaluator for many `λ` at one point `x`.
pub struct BranchingEvaluator {
    // nonzero entries of x, largest first
    x: Vec<f64>,
    // powers[j][e] = x_j^e, grown on demand
    powers: Vec<Vec<f64>>,
    memo: Vec<HashMap<Vec<usize>, f64>>,
}

impl BranchingEvaluator {
    pub fn new(x: &[f64]) -> Self {
        let mut nz: Vec<f64> = x.iter().copied().filter(|&v| v != 0.0).collect();
        nz.sort_by(|a, b| b.total_cmp(a));
        let n = nz.len();
        BranchingEvaluator { x: nz, powers: vec![vec![1.0]; n], memo: vec![HashMap::new(); n + 1] }
    }

    pub fn value(&mut self, lambda: &Partition) -> f64 {
        let n = self.x.len();
        if lambda.rows() > n {
            return 0.0;
        }
        self.eval(n, lambda.parts().to_vec())
    }

    fn power(&mut self, j: usize, e: usize) -> f64 {
        let row = &mut self.powers[j];
        while row.len() <= e {
            let next = row[row.len() - 1] * self.x[j];
            row.push(next);
        }
        row[e]
    }

    // s_mu over the first `j` variables; `mu` has no trailing zeros
    fn eval(&mut self, j: usize, mu: Vec<usize>) -> f64 {
        if mu.is_empty() {
            return 1.0;
        }
        if mu.len() > j {
            return 0.0;
        }
        if j == 1 {
            return self.power(0, mu[0]);
        }
        if let Some(&v) = self.memo[j].get(&mu) {
            return v;
        }
        let weight: usize = mu.iter().sum();
        let mut nu = vec![0usize; mu.len()];
        let mut total = 0.0;
        self.strips(j, &mu, weight, 0, &mut nu, &mut total);
        self.memo[j].insert(mu, total);
        total
    }

    // enumerate nu with mu[i+1] <= nu[i] <= mu[i]
    fn strips(&mut self, j: usize, mu: &[usize], weight: usize, i: usize, nu: &mut Vec<usize>, total: &mut f64) {
        if i == mu.len() {
            let mut key = nu.clone();
            while key.last() == Some(&0) {
                key.pop();
            }
            let inner: usize = key.iter().sum();
            let sub = self.eval(j - 1, key);
            if sub != 0.0 {
                *total += self.power(j - 1, weight - inner) * sub;
            }
            return;
        }
        let lo = mu.get(i + 1).copied().unwrap_or(0);
        for v in lo..=mu[i] {
            nu[i] = v;
            self.strips(j, mu, weight, i + 1, nu, total);
        }
    }
}

/// `s_λ(x) = det[h_{λ_i − i + j}]`.
pub fn schur_polynomial_jacobi_trudi(lambda: &Partition, x: &[f64]) -> f64 {
    let r = lambda.rows();
    if r > nonzero_count(x) {
        return 0.0;
    }
    if r == 0 {
        return 1.0;
    }
    let top = lambda.part(0) + r;
    let h = complete_homogeneous(top, x);
    let m = DMatrix::from_fn(r, r, |i, j| {
        let idx = lambda.part(i) as isize - i as isize + j as isize;
        if idx < 0 {
            0.0
        } else {
            h[idx as usize]
        }
    });
    m.determinant()
}

/// `s_λ(x) = Σ_μ χ^λ(μ) p_μ(x) / z_μ` over all cycle types of the weight.
pub fn schur_polynomial_frobenius(lambda: &Partition, x: &[f64]) -> Result<f64> {
    if lambda.rows() > nonzero_count(x) {
        return Ok(0.0);
    }
    let k = lambda.weight();
    let mut memo = CharacterMemo::new();
    let mut total = 0.0;
    for mu in enumerate_partitions(k, k.max(1))? {
        let chi = memo.character(lambda, &mu)?;
        if chi == 0 {
            continue;
        }
        let z = centralizer_order(&mu).to_f64().unwrap_or(f64::INFINITY);
        total += chi as f64 * power_sum(&mu, x) / z;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::dim_symmetric_irrep;
    use proptest::prelude::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    // Cycle type of a permutation given in one-line notation.
    fn cycle_type(perm: &[usize]) -> Partition {
        let mut seen = vec![false; perm.len()];
        let mut lens = Vec::new();
        for s in 0..perm.len() {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut c = s;
            while !seen[c] {
                seen[c] = true;
                c = perm[c];
                len += 1;
            }
            lens.push(len);
        }
        lens.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(lens).unwrap()
    }

    fn all_perms(k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in all_perms(k - 1) {
            for pos in 0..k {
                let mut q = p.clone();
                q.insert(pos, k - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn class_sizes_match_permutation_count() {
        for k in 1..=6 {
            let mut counts: HashMap<Partition, usize> = HashMap::new();
            for perm in all_perms(k) {
                *counts.entry(cycle_type(&perm)).or_default() += 1;
            }
            for mu in enumerate_partitions(k, k).unwrap() {
                assert_eq!(class_size(&mu), BigUint::from(counts[&mu]), "μ={mu}");
            }
        }
        assert_eq!(class_size(&p(&[2, 1])), BigUint::from(3u32));
        assert_eq!(class_size(&p(&[5])), BigUint::from(24u32));
        assert_eq!(class_size(&Partition::column(6)), BigUint::from(1u32));
    }

    #[test]
    fn character_examples() {
        assert_eq!(character(&p(&[2, 1]), &p(&[1, 1, 1])).unwrap(), 2);
        assert_eq!(character(&p(&[2, 1]), &p(&[3])).unwrap(), -1);
        assert_eq!(character(&p(&[2, 1]), &p(&[2, 1])).unwrap(), 0);
        assert_eq!(character(&p(&[1, 1, 1]), &p(&[2, 1])).unwrap(), -1);
        assert_eq!(character(&p(&[3]), &p(&[2, 1])).unwrap(), 1);
        assert!(character(&p(&[2]), &p(&[1])).is_err());
        assert_eq!(character(&Partition::empty(), &Partition::empty()).unwrap(), 1);
    }

    #[test]
    fn sign_character_is_parity() {
        for k in 1..=7 {
            for mu in enumerate_partitions(k, k).unwrap() {
                let even_cycles = mu.parts().iter().filter(|&&l| l % 2 == 0).count();
                let sign = if even_cycles % 2 == 0 { 1 } else { -1 };
                assert_eq!(character(&Partition::column(k), &mu).unwrap(), sign);
            }
        }
    }

    #[test]
    fn character_orthogonality() {
        for k in 1..=8 {
            let parts = enumerate_partitions(k, k).unwrap();
            let mut memo = CharacterMemo::new();
            let table: Vec<Vec<i128>> = parts
                .iter()
                .map(|l| parts.iter().map(|m| memo.character(l, m).unwrap()).collect())
                .collect();
            let sizes: Vec<i128> = parts.iter().map(|m| class_size(m).to_i128().unwrap()).collect();
            let kf = factorial(k).to_i128().unwrap();
            for a in 0..parts.len() {
                for b in 0..parts.len() {
                    let s: i128 = (0..parts.len()).map(|c| sizes[c] * table[a][c] * table[b][c]).sum();
                    assert_eq!(s, if a == b { kf } else { 0 }, "k={k}");
                }
                let dim = dim_symmetric_irrep(&parts[a]).to_i128().unwrap();
                assert_eq!(table[a][parts.len() - 1], dim);
                assert!(table[a].iter().all(|c| c.abs() <= dim));
            }
        }
    }

    #[test]
    fn power_sum_examples() {
        assert!((power_sum(&p(&[3]), &[0.5, 0.5]) - 0.25).abs() < 1e-15);
        assert!((power_sum(&p(&[1, 1]), &[0.3, 0.7]) - 1.0).abs() < 1e-15);
        assert_eq!(power_sum(&p(&[2]), &[1.0, 0.0]), 1.0);
    }

    #[test]
    fn schur_examples() {
        assert!((schur_polynomial(&p(&[2]), &[0.5, 0.5]) - 0.75).abs() < 1e-15);
        assert!((schur_polynomial(&p(&[1, 1]), &[0.5, 0.5]) - 0.25).abs() < 1e-15);
        assert_eq!(schur_polynomial(&p(&[2, 1]), &[1.0, 0.0, 0.0]), 0.0);
        assert_eq!(schur_polynomial_frobenius(&p(&[1, 1]), &[1.0, 0.0]).unwrap(), 0.0);
    }

    // Monomial oracle: s_λ(x) as a sum over semistandard tableaux.
    fn ssyt_sum(lambda: &Partition, x: &[f64]) -> f64 {
        let cells: Vec<(usize, usize)> = lambda
            .parts()
            .iter()
            .enumerate()
            .flat_map(|(i, &r)| (0..r).map(move |j| (i, j)))
            .collect();
        let mut filling = vec![vec![0usize; lambda.part(0)]; lambda.rows()];
        fn go(
            idx: usize,
            cells: &[(usize, usize)],
            filling: &mut Vec<Vec<usize>>,
            x: &[f64],
            acc: f64,
        ) -> f64 {
            if idx == cells.len() {
                return acc;
            }
            let (i, j) = cells[idx];
            let lo_row = if j > 0 { filling[i][j - 1] } else { 0 };
            let lo_col = if i > 0 { filling[i - 1][j] + 1 } else { 0 };
            let mut s = 0.0;
            for v in lo_row.max(lo_col)..x.len() {
                filling[i][j] = v;
                s += go(idx + 1, cells, filling, x, acc * x[v]);
            }
            s
        }
        go(0, &cells, &mut filling, x, 1.0)
    }

    #[test]
    fn schur_matches_tableau_oracle() {
        let x = [0.4, 0.3, 0.2, 0.1];
        for k in 1..=6 {
            for l in enumerate_partitions(k, 4).unwrap() {
                let oracle = ssyt_sum(&l, &x);
                assert!((schur_polynomial(&l, &x) - oracle).abs() < 1e-15, "λ={l}");
                assert!((schur_polynomial_jacobi_trudi(&l, &x) - oracle).abs() < 1e-13, "λ={l}");
                assert!((schur_polynomial_frobenius(&l, &x).unwrap() - oracle).abs() < 1e-13);
            }
        }
    }

    fn spectrum_strategy(d: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.0f64..1.0, d).prop_filter_map("nonzero", |v| {
            let s: f64 = v.iter().sum();
            (s > 1e-6).then(|| v.iter().map(|x| x / s).collect())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn evaluators_agree(d in 1usize..=4, k in 1usize..=8, seed_spec in spectrum_strategy(4)) {
            let x: Vec<f64> = {
                let v = &seed_spec[..d];
                let s: f64 = v.iter().sum();
                if s > 1e-9 { v.iter().map(|a| a / s).collect() } else { vec![1.0 / d as f64; d] }
            };
            let mut completeness = 0.0;
            for l in enumerate_partitions(k, d).unwrap() {
                let a = schur_polynomial_jacobi_trudi(&l, &x);
                let b = schur_polynomial_frobenius(&l, &x).unwrap();
                prop_assert!((a - b).abs() < 1e-10, "λ={} jt={} fr={}", l, a, b);
                prop_assert!(a > -1e-12);
                completeness += dim_symmetric_irrep(&l).to_f64().unwrap() * a;
            }
            prop_assert!((completeness - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn completeness_up_to_ten() {
        for d in 1..=4 {
            let x: Vec<f64> = (1..=d).map(|i| i as f64).collect();
            let s: f64 = x.iter().sum();
            let x: Vec<f64> = x.iter().map(|v| v / s).collect();
            for k in 1..=10 {
                let total: f64 = enumerate_partitions(k, d)
                    .unwrap()
                    .iter()
                    .map(|l| dim_symmetric_irrep(l).to_f64().unwrap() * schur_polynomial(l, &x))
                    .sum();
                assert!((total - 1.0).abs() < 1e-12, "d={d} k={k} total={total}");
            }
        }
    }
}
