use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::state::{DensityOperator, PureState};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

/// Haar-random pure state: a normalized complex Gaussian vector.
pub fn haar_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PureState {
    assert!(dim >= 1, "dimension must be positive");
    loop {
        let v = DVector::from_fn(dim, |_, _| gaussian(rng));
        if v.norm() > 1e-300 {
            return PureState::normalized(v, vec![dim]).expect("nonzero vector");
        }
    }
}

/// Random density operator `GG†/tr(GG†)` with `G` a `dim × rank` Ginibre
/// matrix (induced measure).
pub fn random_density<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> DensityOperator {
    let g = DMatrix::from_fn(dim, rank.max(1), |_, _| gaussian(rng));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    let m = m.unscale(tr);
    let m = (m.clone() + m.adjoint()).unscale(2.0);
    DensityOperator::from_parts_trusted(m, vec![dim])
}

/// Haar-random unitary via QR of a Ginibre matrix with the phases of
/// `diag(R)` absorbed into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<C64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::max_abs;
    use crate::quantum::ops::trace_distance;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn haar_first_moment_concentrates() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let n = 2000;
        let mut acc = DMatrix::<C64>::zeros(4, 4);
        for _ in 0..n {
            let v = haar_state(4, &mut rng);
            acc += v.amplitudes() * v.amplitudes().adjoint();
        }
        let emp = DensityOperator::from_parts_trusted(acc.unscale(n as f64), vec![4]);
        let d = trace_distance(&emp, &DensityOperator::maximally_mixed(vec![4])).unwrap();
        assert!(d < 0.05, "distance {d}");
    }

    #[test]
    fn seeds_give_different_states() {
        let a = haar_state(4, &mut ChaCha8Rng::seed_from_u64(1));
        let b = haar_state(4, &mut ChaCha8Rng::seed_from_u64(2));
        assert!((a.amplitudes() - b.amplitudes()).norm() > 1e-6);
        let one = haar_state(1, &mut ChaCha8Rng::seed_from_u64(1));
        assert!((one.amplitudes()[0].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unitary_is_unitary() {
        let u = random_unitary(5, &mut ChaCha8Rng::seed_from_u64(9));
        let id = DMatrix::<C64>::identity(5, 5);
        assert!(max_abs(&(u.adjoint() * &u - id)) < 1e-12);
    }

    #[test]
    fn random_density_is_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let r = random_density(4, 2, &mut rng);
        let checked = DensityOperator::new(r.matrix().clone(), vec![4]).unwrap();
        assert_eq!(checked.spectrum().rank(), 2);
    }
}
