use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use schurdist::distillation::{distill_law, expected_ebits, probability_upper_bound, tail_probability};
use schurdist::quantum::{
    fidelity, haar_state, random_density, renyi_entropy, schmidt, trace_distance, BipartiteState, RenyiOrder,
    Spectrum,
};
use schurdist::Limits;

fn spectrum_from(raw: Vec<f64>) -> Spectrum {
    let total: f64 = raw.iter().sum();
    Spectrum::new(raw.iter().map(|x| x / total).collect()).unwrap()
}

fn weights(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..1.0, 1..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn renyi_is_non_increasing_in_order(raw in weights(8)) {
        let s = spectrum_from(raw);
        let orders = [
            RenyiOrder::Zero,
            RenyiOrder::Alpha(0.3),
            RenyiOrder::One,
            RenyiOrder::Alpha(2.0),
            RenyiOrder::Alpha(7.5),
            RenyiOrder::Infinity,
        ];
        let h: Vec<f64> = orders.iter().map(|&o| renyi_entropy(&s, o)).collect();
        for w in h.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-9, "{h:?}");
        }
    }

    #[test]
    fn collision_entropy_at_most_twice_min_entropy(raw in weights(8)) {
        let s = spectrum_from(raw);
        prop_assert!(renyi_entropy(&s, RenyiOrder::Alpha(2.0)) <= 2.0 * renyi_entropy(&s, RenyiOrder::Infinity) + 1e-9);
    }

    #[test]
    fn fuchs_van_de_graaf(seed in any::<u64>(), d in 2usize..6, r in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_density(d, r.min(d), &mut rng);
        let sigma = random_density(d, d, &mut rng);
        let t = trace_distance(&rho, &sigma).unwrap();
        let f = fidelity(&rho, &sigma).unwrap();
        prop_assert!(1.0 - f.sqrt() <= t + 1e-9);
        prop_assert!(t <= (1.0 - f).sqrt() + 1e-9);
    }

    #[test]
    fn schmidt_spectrum_is_shared(seed in any::<u64>(), n_a in 1usize..3, n_b in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = BipartiteState::new(haar_state(1 << (n_a + n_b), &mut rng), n_a, n_b).unwrap();
        let a = psi.reduced_a().spectrum();
        let b = psi.reduced_b().spectrum();
        let sch = schmidt(&psi).spectrum;
        for (i, p) in sch.probabilities().iter().enumerate() {
            prop_assert!((a.probabilities()[i] - p).abs() < 1e-10);
            prop_assert!((b.probabilities()[i] - p).abs() < 1e-10);
        }
    }

    #[test]
    fn outcome_probabilities_respect_the_bound(raw in weights(3), k in 1usize..12) {
        let s = spectrum_from(raw);
        for o in distill_law(&s, k, &Limits::default()).unwrap() {
            prop_assert!(o.probability <= probability_upper_bound(&o.lambda, &s, k) * (1.0 + 1e-9) + 1e-15);
        }
    }

    #[test]
    fn tail_probabilities_fall_with_the_threshold(raw in weights(4), k in 1usize..14) {
        let s = spectrum_from(raw);
        let law = distill_law(&s, k, &Limits::default()).unwrap();
        let mut last = 1.0 + 1e-12;
        for i in 0..=40 {
            let p = tail_probability(&law, i as f64 * k as f64 / 20.0);
            prop_assert!(p <= last);
            last = p;
        }
        prop_assert!((tail_probability(&law, 0.0) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn expected_rate_below_entropy(raw in weights(4), k in 1usize..16) {
        let s = spectrum_from(raw);
        let law = distill_law(&s, k, &Limits::default()).unwrap();
        prop_assert!(expected_ebits(&law) / k as f64 <= renyi_entropy(&s, RenyiOrder::One) + 1e-9);
    }
}
