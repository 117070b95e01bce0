use nalgebra::DMatrix;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::partitions::{dim_symmetric_irrep, factorial, Partition};
use crate::permutation::{all_permutations, Permutation};
use crate::quantum::Spectrum;
use crate::symmetric::{power_sum, CharacterMemo, CycleType};

/// Index map of `R_π` on `(ℂ^d)^{⊗k}`: `R_π|x⟩ = |map[x]⟩`.
///
/// Tensor factor `a` is moved to position `π(a)`; basis index digits are
/// base `d` with factor 0 most significant.
pub fn permutation_index_map(pi: &Permutation, d: usize) -> Vec<usize> {
    let k = pi.len();
    let dim = d.pow(k as u32);
    let mut place = vec![0usize; k];
    for (a, slot) in place.iter_mut().enumerate() {
        // weight of output position π(a)
        *slot = d.pow((k - 1 - pi.image(a)) as u32);
    }
    let mut map = vec![0usize; dim];
    let mut digits = vec![0usize; k];
    for (x, out) in map.iter_mut().enumerate() {
        let mut rem = x;
        for a in (0..k).rev() {
            digits[a] = rem % d;
            rem /= d;
        }
        *out = digits.iter().zip(&place).map(|(&i, &w)| i * w).sum();
    }
    map
}

/// The real permutation matrix `R_π` on `(ℂ^d)^{⊗k}`.
pub fn permutation_operator(pi: &Permutation, d: usize, limits: &Limits) -> Result<DMatrix<f64>> {
    let dim = limits.check_dense("permutation operator", d, pi.len())?;
    let map = permutation_index_map(pi, d);
    let mut m = DMatrix::zeros(dim, dim);
    for (x, &y) in map.iter().enumerate() {
        m[(y, x)] = 1.0;
    }
    Ok(m)
}

/// `tr(R_π ρ^{⊗k}) = ∏_cycles tr ρ^{len}`, evaluated on the spectrum.
pub fn trace_power_product(mu: &CycleType, s: &Spectrum) -> f64 {
    power_sum(mu, s.probabilities())
}

/// `‖ρ‖^{k − #cycles}`, the upper bound on [`trace_power_product`].
pub fn cycle_bound(mu: &CycleType, s: &Spectrum) -> f64 {
    s.max().powi((mu.weight() - mu.rows()) as i32)
}

/// An isotypic projector `Π_λ` on `(ℂ^d)^{⊗k}` (real symmetric).
#[derive(Clone, Debug)]
pub struct IrrepProjector {
    pub lambda: Partition,
    pub d: usize,
    pub matrix: DMatrix<f64>,
}

/// `Π_λ = (dim V_λ / k!) Σ_π χ^λ(π) R_π`, with the character looked up
/// once per conjugacy class.
pub fn irrep_projector(lambda: &Partition, d: usize, limits: &Limits) -> Result<IrrepProjector> {
    if lambda.rows() > d {
        return Err(Error::domain(format!("partition {lambda} has more than {d} rows")));
    }
    let k = lambda.weight();
    let dim = limits.check_dense("irrep projector", d, k)?;
    let scale = dim_symmetric_irrep(lambda).to_f64().unwrap_or(f64::INFINITY)
        / factorial(k).to_f64().unwrap_or(f64::INFINITY);
    let mut memo = CharacterMemo::new();
    let mut class_chi = std::collections::HashMap::new();
    let mut m = DMatrix::<f64>::zeros(dim, dim);
    for pi in all_permutations(k) {
        let mu = pi.cycle_type();
        let chi = match class_chi.get(&mu) {
            Some(&c) => c,
            None => {
                let c = memo.character(lambda, &mu)?;
                class_chi.insert(mu, c);
                c
            }
        };
        if chi == 0 {
            continue;
        }
        let w = scale * chi as f64;
        for (x, y) in permutation_index_map(&pi, d).into_iter().enumerate() {
            m[(y, x)] += w;
        }
    }
    Ok(IrrepProjector { lambda: lambda.clone(), d, matrix: m })
}

/// Numerical rank: singular values above `rel_tol` times the largest.
pub fn numerical_rank_of(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    let sv = m.singular_values();
    let top = sv.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{dim_unitary_irrep, enumerate_partitions};
    use crate::quantum::{random_density, DensityOperator, C64};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn representation_property() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let a = Permutation::random(3, &mut rng);
            let b = Permutation::random(3, &mut rng);
            let lhs = permutation_operator(&a.compose(&b), 3, &lim()).unwrap();
            let rhs = permutation_operator(&a, 3, &lim()).unwrap()
                * permutation_operator(&b, 3, &lim()).unwrap();
            assert_eq!(lhs, rhs);
        }
        assert_eq!(
            permutation_operator(&Permutation::identity(3), 2, &lim()).unwrap(),
            DMatrix::identity(8, 8)
        );
        assert!(permutation_operator(&Permutation::identity(7), 4, &lim()).is_err());
    }

    #[test]
    fn factor_moves_to_image_position() {
        // |0 1 2⟩ on three qutrits under 0→1→2→0 becomes |2 0 1⟩
        let pi = Permutation::long_cycle(3);
        let map = permutation_index_map(&pi, 3);
        assert_eq!(map[5], 2 * 9 + 1);
    }

    #[test]
    fn swap_trick_and_cycle_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rho = random_density(2, 2, &mut rng);
        let swap = permutation_operator(&Permutation::adjacent(2, 0), 2, &lim()).unwrap();
        let rr = rho.tensor(&rho);
        let lhs: C64 = (swap.map(|x| C64::new(x, 0.0)) * rr.matrix()).trace();
        let purity = (rho.matrix() * rho.matrix()).trace();
        assert!((lhs - purity).norm() < 1e-14);

        let mixed = DensityOperator::maximally_mixed(vec![2]).tensor_power(3);
        let cyc = permutation_operator(&Permutation::long_cycle(3), 2, &lim()).unwrap();
        let t = (cyc.map(|x| C64::new(x, 0.0)) * mixed.matrix()).trace();
        assert!((t.re - 0.25).abs() < 1e-15);
    }

    #[test]
    fn trace_power_product_examples() {
        let half = Spectrum::new(vec![0.5, 0.5]).unwrap();
        assert_eq!(trace_power_product(&p(&[3]), &half), 0.25);
        assert_eq!(cycle_bound(&p(&[3]), &half), 0.25);
        assert_eq!(trace_power_product(&p(&[1, 1, 1, 1]), &half), 1.0);
        let pure = Spectrum::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(trace_power_product(&p(&[2]), &pure), 1.0);
        assert_eq!(cycle_bound(&p(&[2]), &pure), 1.0);
    }

    #[test]
    fn projector_examples() {
        let swap = permutation_operator(&Permutation::adjacent(2, 0), 2, &lim()).unwrap();
        let id = DMatrix::<f64>::identity(4, 4);
        let sym = irrep_projector(&p(&[2]), 2, &lim()).unwrap();
        assert!((&sym.matrix - (&id + &swap) / 2.0).abs().max() < 1e-15);
        let anti = irrep_projector(&p(&[1, 1]), 2, &lim()).unwrap();
        assert!((&anti.matrix - (&id - &swap) / 2.0).abs().max() < 1e-15);
        assert_eq!(numerical_rank_of(&sym.matrix, 1e-8), 3);
        assert_eq!(numerical_rank_of(&anti.matrix, 1e-8), 1);
        let mixed = irrep_projector(&p(&[2, 1]), 2, &lim()).unwrap();
        assert_eq!(numerical_rank_of(&mixed.matrix, 1e-8), 4);
        assert!(irrep_projector(&p(&[1, 1, 1]), 2, &lim()).is_err());
    }

    #[test]
    fn projector_algebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in 2..=3 {
            for k in 1..=4 {
                let ls = enumerate_partitions(k, d).unwrap();
                let projs: Vec<_> = ls.iter().map(|l| irrep_projector(l, d, &lim()).unwrap()).collect();
                let dim = d.pow(k as u32);
                let mut total = DMatrix::<f64>::zeros(dim, dim);
                for (i, a) in projs.iter().enumerate() {
                    let m = &a.matrix;
                    assert!((m - m.transpose()).abs().max() < 1e-9);
                    assert!((m * m - m).abs().max() < 1e-9);
                    for b in projs.iter().skip(i + 1) {
                        assert!((m * &b.matrix).abs().max() < 1e-9);
                    }
                    let rank = numerical_rank_of(m, 1e-8);
                    let expected = dim_symmetric_irrep(&a.lambda) * dim_unitary_irrep(&a.lambda, d).unwrap();
                    assert_eq!(rank, expected.to_usize().unwrap());
                    for _ in 0..20 {
                        let r = permutation_operator(&Permutation::random(k, &mut rng), d, &lim()).unwrap();
                        assert!((m * &r - &r * m).abs().max() < 1e-9);
                    }
                    total += m;
                }
                assert!((total - DMatrix::<f64>::identity(dim, dim)).abs().max() < 1e-9);
            }
        }
    }
}
