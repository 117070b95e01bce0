use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::spec::{restricted_supports, sample_state, EnsembleSpec};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::permutation::all_permutations;
use crate::quantum::{hermitian_eigen, trace_norm_hermitian, C64};
use crate::schur_weyl::permutation_index_map;

/// Failure probability at which Bernstein budgets are quoted.
pub const BERNSTEIN_FAILURE: f64 = 0.01;

/// How a moment operator was obtained.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Exactness {
    Exact,
    Empirical { samples: usize, bernstein_bound: f64 },
}

#[derive(Clone, Debug)]
enum Repr {
    Dense(DMatrix<C64>),
    /// Uniform mixture of `ψ_i^{⊗k}`, kept as single-copy vectors.
    Mixture(Vec<DVector<C64>>),
}

/// `E[ψ^{⊗k}]` over a family, either as a dense operator on `(ℂ^D)^{⊗k}`
/// or as an empirical mixture of sampled states.
#[derive(Clone, Debug)]
pub struct MomentOperator {
    pub k: usize,
    /// Single-copy dimension `D`.
    pub dim: usize,
    pub exactness: Exactness,
    repr: Repr,
}

fn kron_power(v: &DVector<C64>, k: usize) -> DVector<C64> {
    let mut out = DVector::from_element(1, C64::new(1.0, 0.0));
    for _ in 0..k {
        out = out.kronecker(v);
    }
    out
}

impl MomentOperator {
    /// The operator as a dense `D^k × D^k` matrix.
    pub fn matrix(&self, limits: &Limits) -> Result<DMatrix<C64>> {
        match &self.repr {
            Repr::Dense(m) => Ok(m.clone()),
            Repr::Mixture(states) => {
                let n = limits.check_dense("moment operator", self.dim, self.k)?;
                let mut m = DMatrix::<C64>::zeros(n, n);
                for v in states {
                    let w = kron_power(v, self.k);
                    m.gerc(C64::new(1.0 / states.len() as f64, 0.0), &w, &w, C64::new(1.0, 0.0));
                }
                Ok(m)
            }
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exactness == Exactness::Exact
    }

    fn budget(&self) -> f64 {
        match self.exactness {
            Exactness::Exact => 0.0,
            Exactness::Empirical { bernstein_bound, .. } => bernstein_bound,
        }
    }
}

/// `ε` solving `exp(−Nε²/(16 d^{2k}) + 1/4) = failure`.
pub fn bernstein_epsilon(d: usize, k: usize, samples: usize, failure: f64) -> f64 {
    let d2k = (d as f64).powi(2 * k as i32);
    (16.0 * d2k * (0.25 - failure.ln()) / samples as f64).sqrt()
}

fn binomial(n: usize, r: usize) -> f64 {
    if r > n {
        return 0.0;
    }
    (0..r).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `tr Π_sym = C(D+k−1, k)`.
pub fn symmetric_dimension(d: usize, k: usize) -> f64 {
    binomial(d + k - 1, k)
}

/// Falling-factorial ratio `s^{(j)}/D^{(j)}`: the chance that `j` fixed
/// distinct strings all land in a uniform `s`-subset of `D`.
fn subset_inclusion(s: usize, d: usize, j: usize) -> f64 {
    if j > s {
        return 0.0;
    }
    (0..j).fold(1.0, |acc, i| acc * (s - i) as f64 / (d - i) as f64)
}

fn distinct_digits(mut x: usize, d: usize, k: usize, buf: &mut Vec<usize>) -> usize {
    buf.clear();
    for _ in 0..k {
        buf.push(x % d);
        x /= d;
    }
    buf.sort_unstable();
    buf.dedup();
    buf.len()
}

/// `Π_sym = (1/k!) Σ_π R_π` on `(ℂ^d)^{⊗k}`, scaled column-wise by
/// `weight(x)`; `weight` must be permutation invariant.
fn weighted_symmetrizer(d: usize, k: usize, limits: &Limits, weight: impl FnMut(usize) -> f64) -> Result<DMatrix<C64>> {
    let n = limits.check_dense("symmetric projector", d, k)?;
    let perms = all_permutations(k);
    let scale = 1.0 / perms.len() as f64;
    let w: Vec<f64> = (0..n).map(weight).collect();
    let mut m = DMatrix::<C64>::zeros(n, n);
    for pi in &perms {
        for (x, y) in permutation_index_map(pi, d).into_iter().enumerate() {
            if w[x] != 0.0 {
                m[(y, x)].re += scale * w[x];
            }
        }
    }
    Ok(m)
}

fn dense_exact(k: usize, dim: usize, m: DMatrix<C64>) -> MomentOperator {
    MomentOperator { k, dim, exactness: Exactness::Exact, repr: Repr::Dense(m) }
}

/// `E_S Π_sym^{(S)} / C(s+k−1,k)` over size-`s` subsets, in closed form:
/// a basis string with `j` distinct letters survives with weight
/// `s^{(j)}/D^{(j)}`.
fn subsystem_moment(d: usize, s: usize, k: usize, limits: &Limits) -> Result<DMatrix<C64>> {
    let norm = symmetric_dimension(s, k);
    let mut buf = Vec::new();
    weighted_symmetrizer(d, k, limits, |x| subset_inclusion(s, d, distinct_digits(x, d, k, &mut buf)) / norm)
}

fn supports_moment(d: usize, s: usize, k: usize, supports: &[Vec<usize>], limits: &Limits) -> Result<DMatrix<C64>> {
    let n = limits.check_dense("symmetric projector", d, k)?;
    let mut acc = DMatrix::<C64>::zeros(n, n);
    let norm = symmetric_dimension(s, k) * supports.len() as f64;
    let mut buf = Vec::new();
    for support in supports {
        let mut member = vec![false; d];
        for &x in support {
            member[x] = true;
        }
        acc += weighted_symmetrizer(d, k, limits, |x| {
            distinct_digits(x, d, k, &mut buf);
            if buf.iter().all(|&l| member[l]) {
                1.0 / norm
            } else {
                0.0
            }
        })?;
    }
    Ok(acc)
}

/// The exact moment. Pseudoentangled families have no exact mode.
pub fn moment_operator(spec: &EnsembleSpec, k: usize, limits: &Limits) -> Result<MomentOperator> {
    spec.validate()?;
    let d = spec.dim();
    let n = spec.qubits();
    let m = match spec {
        EnsembleSpec::Haar { .. } => subsystem_moment(d, d, k, limits)?,
        EnsembleSpec::HaarSubsystem { m, .. } => subsystem_moment(d, 1 << m, k, limits)?,
        EnsembleSpec::RestrictedHaarSubsystem { m, count, permutation_seed, .. } => {
            let supports = restricted_supports(n, *m, *count, *permutation_seed, limits)?;
            supports_moment(d, 1 << m, k, &supports, limits)?
        }
        EnsembleSpec::Pseudoentangled { .. } => {
            return Err(Error::domain("pseudoentangled moments are available in empirical mode only"))
        }
    };
    Ok(dense_exact(k, d, m))
}

/// The Haar-subsystem moment by explicit averaging over every size-`2^m`
/// subset; limited by the subset cap.
pub fn haar_subsystem_moment_by_subsets(n: usize, m: usize, k: usize, limits: &Limits) -> Result<MomentOperator> {
    let d = 1usize << n;
    let s = 1usize << m;
    let count = binomial(d, s);
    if count > limits.subsets as f64 {
        return Err(Error::capacity("subset enumeration", count.min(u128::MAX as f64) as u128, limits.subsets));
    }
    let mut subsets = Vec::new();
    let mut cur: Vec<usize> = (0..s).collect();
    loop {
        subsets.push(cur.clone());
        // next combination in lexicographic order
        let Some(i) = (0..s).rev().find(|&i| cur[i] < d - s + i) else { break };
        cur[i] += 1;
        for j in i + 1..s {
            cur[j] = cur[j - 1] + 1;
        }
    }
    Ok(dense_exact(k, d, supports_moment(d, s, k, &subsets, limits)?))
}

/// Mean of `ψ_i^{⊗k}` over `samples` draws.
pub fn empirical_moment<R: Rng + ?Sized>(
    spec: &EnsembleSpec,
    k: usize,
    samples: usize,
    rng: &mut R,
    limits: &Limits,
) -> Result<MomentOperator> {
    if samples == 0 {
        return Err(Error::domain("empirical moment needs at least one sample"));
    }
    let states = (0..samples)
        .map(|_| sample_state(spec, rng, limits).map(|s| s.state.amplitudes().clone()))
        .collect::<Result<Vec<_>>>()?;
    let d = spec.dim();
    Ok(MomentOperator {
        k,
        dim: d,
        exactness: Exactness::Empirical {
            samples,
            bernstein_bound: bernstein_epsilon(d, k, samples, BERNSTEIN_FAILURE),
        },
        repr: Repr::Mixture(states),
    })
}

/// `‖Σ c_i |v_i⟩⟨v_i|‖₁` from the Gram matrix of the `v_i = ψ_i^{⊗k}`,
/// never forming `D^k`-dimensional vectors.
fn low_rank_trace_norm(vs: &[&DVector<C64>], coeffs: &[f64], k: usize) -> f64 {
    let r = vs.len();
    let g = DMatrix::from_fn(r, r, |i, j| vs[i].dotc(vs[j]).powi(k as i32));
    let (vals, vecs) = hermitian_eigen(&g);
    let top = vals.first().copied().unwrap_or(0.0);
    let keep: Vec<usize> = (0..r).filter(|&i| vals[i] > 1e-12 * top.max(1e-300)).collect();
    let q = keep.len();
    // Λ^{1/2} U† C U Λ^{1/2} restricted to the kept eigenvectors
    let mut m = DMatrix::<C64>::zeros(q, q);
    for (a, &ia) in keep.iter().enumerate() {
        for (b, &ib) in keep.iter().enumerate() {
            let mut s = C64::new(0.0, 0.0);
            for (t, c) in coeffs.iter().enumerate() {
                s += vecs[(t, ia)].conj() * vecs[(t, ib)] * *c;
            }
            m[(a, b)] = s * (vals[ia] * vals[ib]).sqrt();
        }
    }
    trace_norm_hermitian(&m)
}

/// `‖A − B‖₁` between two moments of the same shape.
pub fn moment_trace_norm(a: &MomentOperator, b: &MomentOperator, limits: &Limits) -> Result<f64> {
    if a.dim != b.dim || a.k != b.k {
        return Err(Error::domain("moments of different shapes"));
    }
    if let (Repr::Mixture(x), Repr::Mixture(y)) = (&a.repr, &b.repr) {
        let vs: Vec<&DVector<C64>> = x.iter().chain(y.iter()).collect();
        let mut coeffs = vec![1.0 / x.len() as f64; x.len()];
        coeffs.extend(std::iter::repeat_n(-1.0 / y.len() as f64, y.len()));
        return Ok(low_rank_trace_norm(&vs, &coeffs, a.k));
    }
    Ok(trace_norm_hermitian(&(a.matrix(limits)? - b.matrix(limits)?)))
}

/// Distance between the `k`-copy moments of two families.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentDistance {
    pub k: usize,
    /// `‖E_A[ψ^{⊗k}] − E_B[ψ^{⊗k}]‖₁`; the optimal distinguishing advantage
    /// is half of this.
    pub trace_norm: f64,
    pub trace_distance: f64,
    /// Sum of the Bernstein bounds of empirical sides.
    pub error_budget: f64,
    pub exact: bool,
    pub method: String,
}

fn subsystem_size(spec: &EnsembleSpec) -> Option<usize> {
    match spec {
        EnsembleSpec::Haar { .. } => Some(spec.dim()),
        EnsembleSpec::HaarSubsystem { m, .. } => Some(1 << m),
        _ => None,
    }
}

/// `Σ_j C(D,j) C(k−1,j−1) |w_1(j) − w_2(j)|`: Haar and Haar-subsystem
/// moments are diagonal in the symmetric type basis, with weight depending
/// only on the number `j` of distinct letters.
pub fn subsystem_distance_closed_form(d: usize, s1: usize, s2: usize, k: usize) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let (n1, n2) = (symmetric_dimension(s1, k), symmetric_dimension(s2, k));
    (1..=k.min(d))
        .map(|j| {
            let w1 = subset_inclusion(s1, d, j) / n1;
            let w2 = subset_inclusion(s2, d, j) / n2;
            binomial(d, j) * binomial(k - 1, j - 1) * (w1 - w2).abs()
        })
        .sum()
}

/// Trace-norm distance of `k`-copy moments. Exact where the family allows;
/// pseudoentangled sides use `samples` draws seeded by `seed`.
pub fn moment_distance(
    a: &EnsembleSpec,
    b: &EnsembleSpec,
    k: usize,
    samples: usize,
    seed: u64,
    limits: &Limits,
) -> Result<MomentDistance> {
    a.validate()?;
    b.validate()?;
    if a.dim() != b.dim() {
        return Err(Error::domain(format!("families on {} and {} qubits", a.qubits(), b.qubits())));
    }
    let done = |t: f64, budget: f64, method: &str| MomentDistance {
        k,
        trace_norm: t,
        trace_distance: t / 2.0,
        error_budget: budget,
        exact: budget == 0.0,
        method: method.to_string(),
    };
    if a == b {
        return Ok(done(0.0, 0.0, "identical"));
    }
    if let (Some(s1), Some(s2)) = (subsystem_size(a), subsystem_size(b)) {
        return Ok(done(subsystem_distance_closed_form(a.dim(), s1, s2, k), 0.0, "closed_form"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut get = |spec: &EnsembleSpec| match spec {
        EnsembleSpec::Pseudoentangled { .. } => empirical_moment(spec, k, samples, &mut rng, limits),
        _ => moment_operator(spec, k, limits),
    };
    let (ma, mb) = (get(a)?, get(b)?);
    let t = moment_trace_norm(&ma, &mb, limits)?;
    let method = if ma.is_exact() && mb.is_exact() { "dense" } else { "empirical" };
    Ok(done(t, ma.budget() + mb.budget(), method))
}

/// Empirical `k`-copy mean against the exact moment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub k: usize,
    pub samples: usize,
    pub empirical_trace_norm: f64,
    pub bernstein_epsilon: f64,
    pub failure_probability: f64,
    /// `empirical_trace_norm ≤ bernstein_epsilon`.
    pub pass: bool,
}

pub fn concentration_check<R: Rng + ?Sized>(
    spec: &EnsembleSpec,
    k: usize,
    samples: usize,
    rng: &mut R,
    limits: &Limits,
) -> Result<ConcentrationReport> {
    let exact = moment_operator(spec, k, limits)?;
    let emp = empirical_moment(spec, k, samples, rng, limits)?;
    let t = moment_trace_norm(&exact, &emp, limits)?;
    let eps = bernstein_epsilon(spec.dim(), k, samples, BERNSTEIN_FAILURE);
    Ok(ConcentrationReport {
        k,
        samples,
        empirical_trace_norm: t,
        bernstein_epsilon: eps,
        failure_probability: BERNSTEIN_FAILURE,
        pass: t <= eps,
    })
}
