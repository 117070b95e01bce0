//! Rank-one and product approximations, LOCC tomography budgets,
//! teleportation accounting and the finite-constant rate bounds.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{hermitian_eigen, trace_norm_hermitian, BipartiteState, DensityOperator, PureState, C64};

/// Margin above `1/2` required of the top eigenvalue, so that a spectrum
/// at `1/2` up to rounding is not reported as unique.
pub const UNIQUENESS_SLACK: f64 = 1e-12;

/// Closest pure state to `ρ` in trace norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankOneApproximation {
    pub state: PureState,
    pub operator_norm: f64,
    /// `‖ρ − ψψ†‖₁ = 2(1 − ‖ρ‖)`.
    pub distance: f64,
}

fn top_eigenvector(m: &DMatrix<C64>) -> (f64, DVector<C64>) {
    let (vals, vecs) = hermitian_eigen(m);
    (vals[0], vecs.column(0).into_owned())
}

/// The top eigenvector of `ρ`, unique when `‖ρ‖ > 1/2`.
pub fn closest_rank_one(rho: &DensityOperator) -> Result<RankOneApproximation> {
    let (top, v) = top_eigenvector(rho.matrix());
    if top <= 0.5 + UNIQUENESS_SLACK {
        return Err(Error::domain(format!("‖ρ‖ = {top} ≤ 1/2: closest pure state not unique")));
    }
    Ok(RankOneApproximation {
        state: PureState::normalized(v, rho.dims().to_vec())?,
        operator_norm: top,
        distance: 2.0 * (1.0 - top),
    })
}

/// `ψ_A ⊗ ψ_B` built from the top local eigenvectors, with the distance to
/// `ψ` measured both ways.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductApproximation {
    pub product: BipartiteState,
    pub operator_norm_a: f64,
    pub operator_norm_b: f64,
    /// `|⟨ψ_A ⊗ ψ_B|ψ⟩|²`.
    pub overlap: f64,
    /// `‖ψψ† − φφ†‖₁`, computed from the dense difference.
    pub trace_norm: f64,
    /// `‖ψψ† − φφ†‖₂`, computed from the dense difference.
    pub hilbert_schmidt: f64,
    /// `√(2(1 − ‖ρ_A‖))`.
    pub predicted_norm: f64,
}

pub fn product_approximation(psi: &BipartiteState) -> Result<ProductApproximation> {
    let (la, a) = top_eigenvector(psi.reduced_a().matrix());
    let (lb, b) = top_eigenvector(psi.reduced_b().matrix());
    if la <= 0.5 + UNIQUENESS_SLACK {
        return Err(Error::domain(format!("‖ρ_A‖ = {la} ≤ 1/2: product approximation not unique")));
    }
    let prod = PureState::normalized(a.kronecker(&b), vec![psi.state.dim()])?;
    let product = BipartiteState::new(prod, psi.n_a, psi.n_b)?;
    let x = psi.state.amplitudes();
    let y = product.state.amplitudes();
    let diff = x * x.adjoint() - y * y.adjoint();
    Ok(ProductApproximation {
        overlap: y.dotc(x).norm_sqr(),
        trace_norm: trace_norm_hermitian(&diff),
        hilbert_schmidt: diff.norm(),
        predicted_norm: (2.0 * (1.0 - la)).max(0.0).sqrt(),
        operator_norm_a: la,
        operator_norm_b: lb,
        product,
    })
}

/// `⌈x⌉`, with values within `1e−9` (relative) of an integer snapped first
/// so that floating noise in exact products does not add a copy.
fn snapped_ceil(x: f64) -> u64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r as u64
    } else {
        x.ceil() as u64
    }
}

fn check_epsilon(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::domain(format!("ε = {eps} outside (0, 1)")));
    }
    Ok(())
}

/// Copies for principal-component tomography in dimension `d`:
/// `⌈d/ε²⌉`. The constant 1 is an order-of-magnitude choice.
pub fn pct_budget(d: u64, eps: f64) -> Result<u64> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::domain(format!("ε = {eps} outside (0, 1]")));
    }
    Ok(snapped_ceil(d as f64 / (eps * eps)))
}

/// Ebits consumed teleporting `copies` states of `n` qubits.
pub fn teleportation_cost(n: u64, copies: u64) -> Result<u64> {
    n.checked_mul(copies).ok_or_else(|| Error::domain("teleportation cost overflows"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TomographyBranch {
    ProductApproximation,
    DistillAndTeleport,
}

/// Copy accounting for two-party LOCC tomography of a pure state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TomographyPlan {
    pub n: u64,
    pub epsilon: f64,
    pub s_min: Option<f64>,
    pub branch: TomographyBranch,
    /// Tomography copies for one party holding the whole state.
    pub tomography_copies: u64,
    pub pct_copies_a: u64,
    pub pct_copies_b: u64,
    /// `ε/4`, the accuracy asked of each local principal-component step.
    pub product_epsilon: f64,
    /// `⌈4nK_n/S_min⌉` when `S_min` is known, else the cap.
    pub distillation_copies: Option<u64>,
    /// `32nK_n/ε²`, valid whenever `S_min > ε²/8`.
    pub distillation_cap: u64,
    /// `n·K_n` ebits to teleport the tomography copies.
    pub teleport_ebits: u64,
    /// Success probability of the distillation step alone; the estimator's
    /// own success probability is not composed in.
    pub distillation_success_probability: Option<f64>,
    /// Copies used by the selected branch.
    pub branch_copies: u64,
    /// `max{(32n/ε² + 1)·K_n, K_A + K_B}`.
    pub total_copies: u64,
}

/// Branch (i) when `S_min ≤ ε²/8`, else branch (ii). Without `S_min` the
/// plan takes branch (ii) at its cap.
pub fn locc_tomography_plan(
    n: u64,
    eps: f64,
    k_n: u64,
    k_a: u64,
    k_b: u64,
    s_min: Option<f64>,
) -> Result<TomographyPlan> {
    check_epsilon(eps)?;
    if n == 0 || k_n == 0 || k_a == 0 || k_b == 0 {
        return Err(Error::domain("n and all budgets must be positive"));
    }
    if let Some(s) = s_min {
        if !(s >= 0.0 && s.is_finite()) {
            return Err(Error::domain(format!("S_min = {s} must be finite and non-negative")));
        }
    }
    let nf = n as f64;
    let cap = snapped_ceil(32.0 * nf * k_n as f64 / (eps * eps));
    let full = snapped_ceil((32.0 * nf / (eps * eps) + 1.0) * k_n as f64);
    let local = k_a + k_b;
    let product_branch = matches!(s_min, Some(s) if s <= eps * eps / 8.0);
    let (branch, distillation_copies, branch_copies) = if product_branch {
        (TomographyBranch::ProductApproximation, None, local)
    } else {
        let k = match s_min {
            Some(s) => snapped_ceil(4.0 * nf * k_n as f64 / s),
            None => cap,
        };
        (TomographyBranch::DistillAndTeleport, Some(k), k + k_n)
    };
    Ok(TomographyPlan {
        n,
        epsilon: eps,
        s_min,
        branch,
        tomography_copies: k_n,
        pct_copies_a: k_a,
        pct_copies_b: k_b,
        product_epsilon: eps / 4.0,
        distillation_copies,
        distillation_cap: cap,
        teleport_ebits: teleportation_cost(n, k_n)?,
        distillation_success_probability: (!product_branch).then_some(2.0 / 3.0),
        branch_copies,
        total_copies: full.max(local),
    })
}

/// One measurement branch of single-qubit teleportation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TeleportBranch {
    pub outcome: (u8, u8),
    pub probability: f64,
    pub fidelity: f64,
}

/// Simulates teleporting `(α, β)` through `|φ⁺⟩` on three qubits: CNOT and
/// Hadamard on the sender, measurement of both sender qubits and the
/// Pauli correction `X^{m₁} Z^{m₀}` on the receiver.
pub fn teleport_qubit(alpha: C64, beta: C64) -> Result<Vec<TeleportBranch>> {
    let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::domain("input qubit is not normalized"));
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let zero = C64::new(0.0, 0.0);
    // qubit 0 most significant
    let mut s = [zero; 8];
    for (q0, amp) in [(0usize, alpha), (1, beta)] {
        s[q0 << 2] += amp * h;
        s[(q0 << 2) | 0b011] += amp * h;
    }
    // CNOT 0 → 1
    let mut t = [zero; 8];
    for (i, &a) in s.iter().enumerate() {
        let j = if i & 0b100 != 0 { i ^ 0b010 } else { i };
        t[j] += a;
    }
    // H on qubit 0
    let mut u = [zero; 8];
    for (i, &a) in t.iter().enumerate() {
        let lo = i & 0b011;
        let sign = if i & 0b100 != 0 { -1.0 } else { 1.0 };
        u[lo] += a * h;
        u[lo | 0b100] += a * h * sign;
    }
    let mut branches = Vec::with_capacity(4);
    for m0 in 0..2u8 {
        for m1 in 0..2u8 {
            let base = ((m0 as usize) << 2) | ((m1 as usize) << 1);
            let (mut c0, mut c1) = (u[base], u[base | 1]);
            let p = c0.norm_sqr() + c1.norm_sqr();
            if m1 == 1 {
                std::mem::swap(&mut c0, &mut c1);
            }
            if m0 == 1 {
                c1 = -c1;
            }
            let f = if p > 0.0 { (alpha.conj() * c0 + beta.conj() * c1).norm_sqr() / p } else { 0.0 };
            branches.push(TeleportBranch { outcome: (m0, m1), probability: p, fidelity: f });
        }
    }
    Ok(branches)
}

/// Finite-constant bounds `R_D ≤ S₁/(p − ε)` and `R_C ≥ p·S₁ − n_A·p·ε`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateBounds {
    pub distill_upper: f64,
    pub dilute_lower: f64,
    /// `ε ≤ S₁/n_A`; otherwise the dilution bound says nothing.
    pub dilute_informative: bool,
}

pub fn rate_bounds(s1: f64, n_a: u64, p: f64, eps: f64) -> Result<RateBounds> {
    if p <= eps {
        return Err(Error::domain(format!("success probability {p} must exceed ε = {eps}")));
    }
    if s1 < 0.0 || eps < 0.0 {
        return Err(Error::domain("S₁ and ε must be non-negative"));
    }
    Ok(RateBounds {
        distill_upper: s1 / (p - eps),
        dilute_lower: p * s1 - n_a as f64 * p * eps,
        dilute_informative: eps <= s1 / n_a as f64,
    })
}
