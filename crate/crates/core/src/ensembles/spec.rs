use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::quantum::{haar_state, BipartiteState, PureState, C64};

/// A family of bipartite pure states on qubits.
///
/// `Pseudoentangled` wraps an inner family on `n` qubits into a state on
/// `n + 2` qubits: one flag qubit per side selects between the planted
/// branch (`n − 2s` zeros and `s` ebits) and the inner state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum EnsembleSpec {
    Haar { n_a: usize, n_b: usize },
    HaarSubsystem { n_a: usize, n_b: usize, m: usize },
    RestrictedHaarSubsystem { n_a: usize, n_b: usize, m: usize, count: usize, permutation_seed: u64 },
    Pseudoentangled { inner: Box<EnsembleSpec>, eta: f64, s_min: usize },
}

fn balanced(n: usize) -> (usize, usize) {
    (n / 2, n - n / 2)
}

impl EnsembleSpec {
    pub fn haar(n: usize) -> Self {
        let (n_a, n_b) = balanced(n);
        EnsembleSpec::Haar { n_a, n_b }
    }

    pub fn haar_subsystem(n: usize, m: usize) -> Self {
        let (n_a, n_b) = balanced(n);
        EnsembleSpec::HaarSubsystem { n_a, n_b, m }
    }

    pub fn restricted(n: usize, m: usize, count: usize, permutation_seed: u64) -> Self {
        let (n_a, n_b) = balanced(n);
        EnsembleSpec::RestrictedHaarSubsystem { n_a, n_b, m, count, permutation_seed }
    }

    pub fn pseudoentangled(inner: EnsembleSpec, eta: f64, s_min: usize) -> Self {
        EnsembleSpec::Pseudoentangled { inner: Box::new(inner), eta, s_min }
    }

    /// Qubits on each side.
    pub fn bipartition(&self) -> (usize, usize) {
        match self {
            EnsembleSpec::Haar { n_a, n_b }
            | EnsembleSpec::HaarSubsystem { n_a, n_b, .. }
            | EnsembleSpec::RestrictedHaarSubsystem { n_a, n_b, .. } => (*n_a, *n_b),
            EnsembleSpec::Pseudoentangled { inner, .. } => {
                let (a, b) = inner.bipartition();
                (a + 1, b + 1)
            }
        }
    }

    pub fn qubits(&self) -> usize {
        let (a, b) = self.bipartition();
        a + b
    }

    /// Hilbert-space dimension `2^n`.
    pub fn dim(&self) -> usize {
        1usize << self.qubits()
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            EnsembleSpec::Haar { .. } => {}
            EnsembleSpec::HaarSubsystem { m, .. } | EnsembleSpec::RestrictedHaarSubsystem { m, .. } => {
                if *m > self.qubits() {
                    return Err(Error::domain(format!("subsystem size {m} exceeds {} qubits", self.qubits())));
                }
                if let EnsembleSpec::RestrictedHaarSubsystem { count, .. } = self {
                    if *count == 0 {
                        return Err(Error::domain("restricted ensemble needs at least one permutation"));
                    }
                }
            }
            EnsembleSpec::Pseudoentangled { inner, eta, s_min } => {
                inner.validate()?;
                if !(0.0..=1.0).contains(eta) {
                    return Err(Error::domain(format!("η = {eta} outside [0, 1]")));
                }
                let (a, b) = inner.bipartition();
                if *s_min > a.min(b) {
                    return Err(Error::domain(format!("S_min = {s_min} exceeds min(n_A, n_B) = {}", a.min(b))));
                }
            }
        }
        Ok(())
    }

    fn check_size(&self, limits: &Limits) -> Result<()> {
        limits.check_dense("ensemble state", 2, self.qubits()).map(|_| ())
    }
}

/// Supports of the first `2^m` basis strings under `count` seeded
/// uniform permutations of `{0,1}^n`.
pub(crate) fn restricted_supports(n: usize, m: usize, count: usize, seed: u64, limits: &Limits) -> Result<Vec<Vec<usize>>> {
    if count as u128 > limits.subsets {
        return Err(Error::capacity("restricted permutations", count as u128, limits.subsets));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = 1usize << n;
    let s = 1usize << m;
    let mut pool: Vec<usize> = (0..d).collect();
    Ok((0..count)
        .map(|_| {
            let (head, _) = pool.partial_shuffle(&mut rng, s);
            head.to_vec()
        })
        .collect())
}

fn subsystem_state<R: Rng + ?Sized>(n: usize, m: usize, support: &[usize], rng: &mut R) -> DVector<C64> {
    let phi = haar_state(1 << m, rng);
    let mut v = DVector::from_element(1 << n, C64::new(0.0, 0.0));
    for (x, &y) in support.iter().enumerate() {
        v[y] = phi.amplitudes()[x];
    }
    v
}

/// Draws one state of the family.
pub fn sample_state<R: Rng + ?Sized>(spec: &EnsembleSpec, rng: &mut R, limits: &Limits) -> Result<BipartiteState> {
    spec.validate()?;
    spec.check_size(limits)?;
    let (n_a, n_b) = spec.bipartition();
    let n = n_a + n_b;
    let amps = match spec {
        EnsembleSpec::Haar { .. } => haar_state(1 << n, rng).amplitudes().clone(),
        EnsembleSpec::HaarSubsystem { m, .. } => {
            let mut pool: Vec<usize> = (0..1usize << n).collect();
            let (head, _) = pool.partial_shuffle(rng, 1 << m);
            let support = head.to_vec();
            subsystem_state(n, *m, &support, rng)
        }
        EnsembleSpec::RestrictedHaarSubsystem { m, count, permutation_seed, .. } => {
            let supports = restricted_supports(n, *m, *count, *permutation_seed, limits)?;
            let i = rng.random_range(0..*count);
            subsystem_state(n, *m, &supports[i], rng)
        }
        EnsembleSpec::Pseudoentangled { inner, eta, s_min } => {
            let psi = sample_state(inner, rng, limits)?;
            planted_amplitudes(&psi, *eta, *s_min)
        }
    };
    BipartiteState::new(PureState::new(amps, vec![1 << n])?, n_a, n_b)
}

/// `√(1−η)|0⟩_A|0⟩_B|0…0⟩|φ⁺⟩^{⊗s} + √η|1⟩_A|1⟩_B|ψ⟩`, with each side's
/// register laid out as flag, zeros, then ebit halves.
pub(crate) fn planted_amplitudes(psi: &BipartiteState, eta: f64, s_min: usize) -> DVector<C64> {
    let (ia, ib) = (psi.dim_a(), psi.dim_b());
    let (da, db) = (2 * ia, 2 * ib);
    let mut v = DVector::from_element(da * db, C64::new(0.0, 0.0));
    let ebits = 1usize << s_min;
    let w = ((1.0 - eta) / ebits as f64).sqrt();
    for x in 0..ebits {
        v[x * db + x] = C64::new(w, 0.0);
    }
    let c = psi.coefficients();
    let r = eta.sqrt();
    for a in 0..ia {
        for b in 0..ib {
            v[(ia + a) * db + ib + b] = c[(a, b)] * r;
        }
    }
    v
}

impl fmt::Display for EnsembleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnsembleSpec::Haar { n_a, n_b } => write!(f, "haar:{}", n_a + n_b),
            EnsembleSpec::HaarSubsystem { n_a, n_b, m } => write!(f, "subsystem:{}:{m}", n_a + n_b),
            EnsembleSpec::RestrictedHaarSubsystem { n_a, n_b, m, count, permutation_seed } => {
                write!(f, "restricted:{}:{m}:{count}:{permutation_seed}", n_a + n_b)
            }
            EnsembleSpec::Pseudoentangled { inner, eta, s_min } => write!(f, "pseudo:{eta}:{s_min}:{inner}"),
        }
    }
}

fn field<T: FromStr>(s: Option<&str>, what: &str, whole: &str) -> Result<T> {
    s.and_then(|x| x.trim().parse().ok())
        .ok_or_else(|| Error::domain(format!("bad or missing {what} in ensemble '{whole}'")))
}

/// Parses `haar:n`, `subsystem:n:m`, `restricted:n:m:N:seed` and
/// `pseudo:eta:smin:<inner>`; the qubits are split evenly, with the extra
/// one on `B`.
impl FromStr for EnsembleSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let spec = match s.split_once(':') {
            Some(("pseudo", rest)) => {
                let mut it = rest.splitn(3, ':');
                let eta = field(it.next(), "eta", s)?;
                let s_min = field(it.next(), "smin", s)?;
                let inner = it.next().ok_or_else(|| Error::domain(format!("missing inner ensemble in '{s}'")))?;
                EnsembleSpec::pseudoentangled(inner.parse()?, eta, s_min)
            }
            Some((kind, rest)) => {
                let mut it = rest.split(':');
                let spec = match kind {
                    "haar" => EnsembleSpec::haar(field(it.next(), "n", s)?),
                    "subsystem" => EnsembleSpec::haar_subsystem(field(it.next(), "n", s)?, field(it.next(), "m", s)?),
                    "restricted" => EnsembleSpec::restricted(
                        field(it.next(), "n", s)?,
                        field(it.next(), "m", s)?,
                        field(it.next(), "N", s)?,
                        field(it.next(), "seed", s)?,
                    ),
                    _ => return Err(Error::domain(format!("unknown ensemble kind '{kind}'"))),
                };
                if it.next().is_some() {
                    return Err(Error::domain(format!("trailing fields in ensemble '{s}'")));
                }
                spec
            }
            None => return Err(Error::domain(format!("cannot parse ensemble '{s}'"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{renyi_entropy, RenyiOrder};
    use crate::sampling::trial_rng;

    fn support_size(psi: &BipartiteState) -> usize {
        psi.state.amplitudes().iter().filter(|a| a.norm() > 1e-14).count()
    }

    #[test]
    fn haar_sample_is_unit() {
        let psi = sample_state(&EnsembleSpec::haar(2), &mut trial_rng(3, 0), &Limits::default()).unwrap();
        assert_eq!(psi.state.dim(), 4);
        assert!((psi.state.amplitudes().norm() - 1.0).abs() < 1e-12);
        assert_eq!((psi.n_a, psi.n_b), (1, 1));
    }

    #[test]
    fn subsystem_support() {
        let spec = EnsembleSpec::haar_subsystem(4, 2);
        for i in 0..10 {
            let psi = sample_state(&spec, &mut trial_rng(8, i), &Limits::default()).unwrap();
            assert_eq!(support_size(&psi), 4);
        }
        let spec = EnsembleSpec::restricted(3, 1, 5, 42);
        let supports = restricted_supports(3, 1, 5, 42, &Limits::default()).unwrap();
        for i in 0..10 {
            let psi = sample_state(&spec, &mut trial_rng(8, i), &Limits::default()).unwrap();
            let nz: Vec<usize> = (0..8).filter(|&x| psi.state.amplitudes()[x].norm() > 1e-14).collect();
            assert!(supports.iter().any(|s| {
                let mut s = s.clone();
                s.sort();
                s == nz
            }));
        }
    }

    #[test]
    fn planted_branch_only_at_zero_eta() {
        let spec = EnsembleSpec::pseudoentangled(EnsembleSpec::haar(4), 0.0, 2);
        let psi = sample_state(&spec, &mut trial_rng(1, 0), &Limits::default()).unwrap();
        assert_eq!((psi.n_a, psi.n_b), (3, 3));
        let s1 = renyi_entropy(&psi.spectrum_a(), RenyiOrder::One);
        assert!((s1 - 2.0).abs() < 1e-10);
    }

    #[test]
    fn branches_are_orthogonal() {
        let mut rng = trial_rng(4, 0);
        let inner = sample_state(&EnsembleSpec::haar(4), &mut rng, &Limits::default()).unwrap();
        let planted = planted_amplitudes(&inner, 0.0, 1);
        let hidden = planted_amplitudes(&inner, 1.0, 1);
        assert_eq!(planted.dotc(&hidden), C64::new(0.0, 0.0));
    }

    #[test]
    fn parse_round_trip() {
        for s in ["haar:3", "subsystem:4:2", "restricted:3:1:28:7", "pseudo:0.5:1:subsystem:4:2", "pseudo:0.25:0:pseudo:1:0:haar:2"] {
            let spec: EnsembleSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
            let json = serde_json::to_string(&spec).unwrap();
            assert_eq!(serde_json::from_str::<EnsembleSpec>(&json).unwrap(), spec);
        }
        assert!(serde_json::to_string(&EnsembleSpec::haar(2)).unwrap().contains(r#""variant":"haar""#));
        for bad in ["haar", "haar:x", "subsystem:2:3", "pseudo:2:0:haar:2", "pseudo:0.5:3:haar:4", "cube:3", "haar:2:1"] {
            assert!(bad.parse::<EnsembleSpec>().is_err(), "{bad}");
        }
    }
}
