use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::max_abs;
use super::ops::hermitian_eigen;
use super::{HERMITICITY_TOLERANCE, RANK_TOLERANCE};
use crate::error::{Error, Result};

const NORM_TOLERANCE: f64 = 1e-12;
const TRACE_TOLERANCE: f64 = 1e-10;
const PSD_TOLERANCE: f64 = 1e-10;

fn check_dims(len: usize, dims: &[usize]) -> Result<()> {
    if dims.contains(&0) {
        return Err(Error::domain(format!("subsystem dimensions must be positive, got {dims:?}")));
    }
    let prod: usize = dims.iter().product();
    if prod != len {
        return Err(Error::domain(format!(
            "subsystem dimensions {dims:?} multiply to {prod}, expected {len}"
        )));
    }
    Ok(())
}

/// A unit vector together with its tensor factorization.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: DVector<C64>,
    dims: Vec<usize>,
}

impl PureState {
    /// Validates the norm to `1e−12` and the factorization.
    pub fn new(amplitudes: DVector<C64>, dims: Vec<usize>) -> Result<Self> {
        check_dims(amplitudes.len(), &dims)?;
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::domain(format!("state norm is {norm}, expected 1")));
        }
        Ok(PureState { amplitudes, dims })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(amplitudes: DVector<C64>, dims: Vec<usize>) -> Result<Self> {
        check_dims(amplitudes.len(), &dims)?;
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::domain("cannot normalize a zero or non-finite vector"));
        }
        Ok(PureState { amplitudes: amplitudes.unscale(norm), dims })
    }

    /// `|i⟩` in the computational basis.
    pub fn basis(index: usize, dims: Vec<usize>) -> Result<Self> {
        let dim: usize = dims.iter().product();
        if index >= dim {
            return Err(Error::domain(format!("basis index {index} out of range {dim}")));
        }
        let mut v = DVector::zeros(dim);
        v[index] = C64::new(1.0, 0.0);
        Self::new(v, dims)
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn inner(&self, other: &PureState) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        let amplitudes = self.amplitudes.kronecker(&other.amplitudes);
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        PureState { amplitudes, dims }
    }

    pub fn density(&self) -> DensityOperator {
        let m = &self.amplitudes * self.amplitudes.adjoint();
        DensityOperator { matrix: m, dims: self.dims.clone() }
    }
}

#[derive(Serialize, Deserialize)]
struct PureStateRepr {
    dims: Vec<usize>,
    amplitudes: Vec<f64>,
}

impl Serialize for PureState {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PureStateRepr { dims: self.dims.clone(), amplitudes: interleave(self.amplitudes.iter()) }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PureState {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PureStateRepr::deserialize(d)?;
        let amps = deinterleave(&r.amplitudes).map_err(D::Error::custom)?;
        PureState::new(DVector::from_vec(amps), r.dims).map_err(D::Error::custom)
    }
}

fn interleave<'a>(it: impl Iterator<Item = &'a C64>) -> Vec<f64> {
    it.flat_map(|c| [c.re, c.im]).collect()
}

fn deinterleave(v: &[f64]) -> std::result::Result<Vec<C64>, String> {
    if !v.len().is_multiple_of(2) {
        return Err("interleaved complex array has odd length".into());
    }
    Ok(v.chunks(2).map(|c| C64::new(c[0], c[1])).collect())
}

/// A density operator with its tensor factorization.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: DMatrix<C64>,
    dims: Vec<usize>,
}

impl DensityOperator {
    /// Symmetrizes `(ρ+ρ†)/2` after checking the Hermiticity defect is at
    /// most `1e−8`, then checks unit trace and positivity.
    pub fn new(matrix: DMatrix<C64>, dims: Vec<usize>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::domain("density operator must be square"));
        }
        check_dims(matrix.nrows(), &dims)?;
        let herm = hermitize(matrix)?;
        let tr = herm.trace();
        if (tr.re - 1.0).abs() > TRACE_TOLERANCE || tr.im.abs() > TRACE_TOLERANCE {
            return Err(Error::domain(format!("density operator trace is {tr}, expected 1")));
        }
        let (vals, _) = hermitian_eigen(&herm);
        let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -PSD_TOLERANCE {
            return Err(Error::domain(format!(
                "density operator has negative eigenvalue {min}"
            )));
        }
        Ok(DensityOperator { matrix: herm, dims })
    }

    /// Skips the positivity check; used where positivity holds by
    /// construction and the matrix is too large to diagonalize cheaply.
    pub(crate) fn from_parts_trusted(matrix: DMatrix<C64>, dims: Vec<usize>) -> Self {
        debug_assert_eq!(matrix.nrows(), dims.iter().product::<usize>());
        DensityOperator { matrix, dims }
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let d: usize = dims.iter().product();
        let m = DMatrix::identity(d, d).unscale(d as f64);
        DensityOperator { matrix: m.map(|x: f64| C64::new(x, 0.0)), dims }
    }

    /// Diagonal density operator from a probability vector.
    pub fn diagonal(probs: &[f64], dims: Vec<usize>) -> Result<Self> {
        let m = DMatrix::from_diagonal(&DVector::from_iterator(
            probs.len(),
            probs.iter().map(|&p| C64::new(p, 0.0)),
        ));
        Self::new(m, dims)
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn tensor(&self, other: &DensityOperator) -> DensityOperator {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        DensityOperator { matrix: self.matrix.kronecker(&other.matrix), dims }
    }

    /// `ρ^{⊗k}`, with the factorization repeated `k` times.
    pub fn tensor_power(&self, k: usize) -> DensityOperator {
        let mut out = DensityOperator {
            matrix: DMatrix::from_element(1, 1, C64::new(1.0, 0.0)),
            dims: Vec::new(),
        };
        for _ in 0..k {
            out = out.tensor(self);
        }
        out
    }

    /// Eigenvalues as a [`Spectrum`].
    pub fn spectrum(&self) -> Spectrum {
        let (vals, _) = hermitian_eigen(&self.matrix);
        Spectrum::from_eigenvalues(vals)
    }

    /// Largest eigenvalue, `‖ρ‖`.
    pub fn operator_norm(&self) -> f64 {
        self.spectrum().max()
    }

    /// `tr(ρσ)`, real for Hermitian arguments.
    pub fn overlap(&self, other: &DensityOperator) -> f64 {
        self.matrix.component_mul(&other.matrix.transpose()).sum().re
    }

    pub fn expectation(&self, psi: &PureState) -> f64 {
        let v = psi.amplitudes();
        v.dotc(&(&self.matrix * v)).re
    }
}

pub(crate) fn hermitize(matrix: DMatrix<C64>) -> Result<DMatrix<C64>> {
    let adj = matrix.adjoint();
    let defect = max_abs(&(&matrix - &adj));
    if defect > HERMITICITY_TOLERANCE {
        return Err(Error::domain(format!("matrix is not Hermitian (defect {defect:e})")));
    }
    Ok((matrix + adj).unscale(2.0))
}

#[derive(Serialize, Deserialize)]
struct DensityRepr {
    dims: Vec<usize>,
    matrix: Vec<f64>,
}

impl Serialize for DensityOperator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.dim();
        let row_major: Vec<f64> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .flat_map(|(i, j)| {
                let c = self.matrix[(i, j)];
                [c.re, c.im]
            })
            .collect();
        DensityRepr { dims: self.dims.clone(), matrix: row_major }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensityOperator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = DensityRepr::deserialize(d)?;
        let entries = deinterleave(&r.matrix).map_err(D::Error::custom)?;
        let n: usize = r.dims.iter().product();
        if entries.len() != n * n {
            return Err(D::Error::custom(format!(
                "expected {} matrix entries, got {}",
                n * n,
                entries.len()
            )));
        }
        let m = DMatrix::from_row_slice(n, n, &entries);
        DensityOperator::new(m, r.dims).map_err(D::Error::custom)
    }
}

/// A probability vector sorted non-increasingly.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    probabilities: Vec<f64>,
}

impl Spectrum {
    /// Validates entries in `[0,1]` and unit sum to `1e−12`, then sorts.
    pub fn new(mut probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::domain("spectrum must be nonempty"));
        }
        if probabilities.iter().any(|p| !p.is_finite() || *p < 0.0 || *p > 1.0) {
            return Err(Error::domain(format!(
                "spectrum entries must lie in [0,1], got {probabilities:?}"
            )));
        }
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::domain(format!("spectrum sums to {sum}, expected 1")));
        }
        probabilities.sort_by(|a, b| b.total_cmp(a));
        Ok(Spectrum { probabilities })
    }

    /// Clamps eigenvalues in `[−1e−10, 0)` to zero and renormalizes.
    pub fn from_eigenvalues(mut vals: Vec<f64>) -> Self {
        for v in vals.iter_mut() {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        let sum: f64 = vals.iter().sum();
        if sum > 0.0 {
            for v in vals.iter_mut() {
                *v /= sum;
            }
        }
        vals.sort_by(|a, b| b.total_cmp(a));
        Spectrum { probabilities: vals }
    }

    /// The flat spectrum on `r` outcomes.
    pub fn uniform(r: usize) -> Self {
        assert!(r > 0);
        Spectrum { probabilities: vec![1.0 / r as f64; r] }
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    /// Largest entry, the operator norm of the underlying state.
    pub fn max(&self) -> f64 {
        self.probabilities[0]
    }

    /// `γ = 1/‖ρ‖`.
    pub fn gamma(&self) -> f64 {
        1.0 / self.max()
    }

    /// Count of entries above [`RANK_TOLERANCE`].
    pub fn rank(&self) -> usize {
        self.probabilities.iter().filter(|&&p| p > RANK_TOLERANCE).count()
    }

    /// Entries above [`RANK_TOLERANCE`], in order.
    pub fn support(&self) -> &[f64] {
        &self.probabilities[..self.rank()]
    }
}

impl Serialize for Spectrum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.probabilities.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Spectrum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Spectrum::new(Vec::<f64>::deserialize(d)?).map_err(D::Error::custom)
    }
}

/// A pure state on `n_A + n_B` qubits split between two parties.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BipartiteState {
    pub state: PureState,
    pub n_a: usize,
    pub n_b: usize,
}

impl BipartiteState {
    /// Checks the state is a `2^{n_A}·2^{n_B}` vector and records the
    /// split as two factors.
    pub fn new(state: PureState, n_a: usize, n_b: usize) -> Result<Self> {
        let (da, db) = (1usize << n_a, 1usize << n_b);
        if state.dim() != da * db {
            return Err(Error::domain(format!(
                "state has dimension {}, split ({n_a},{n_b}) needs {}",
                state.dim(),
                da * db
            )));
        }
        let state = PureState { amplitudes: state.amplitudes, dims: vec![da, db] };
        Ok(BipartiteState { state, n_a, n_b })
    }

    pub fn from_amplitudes(amps: Vec<C64>, n_a: usize, n_b: usize) -> Result<Self> {
        let len = amps.len();
        let psi = PureState::new(DVector::from_vec(amps), vec![len])?;
        Self::new(psi, n_a, n_b)
    }

    pub fn dim_a(&self) -> usize {
        1 << self.n_a
    }

    pub fn dim_b(&self) -> usize {
        1 << self.n_b
    }

    /// Coefficient matrix `C` with `ψ = Σ C[a,b] |a⟩|b⟩`.
    pub fn coefficients(&self) -> DMatrix<C64> {
        let (da, db) = (self.dim_a(), self.dim_b());
        DMatrix::from_fn(da, db, |a, b| self.state.amplitudes()[a * db + b])
    }

    /// `ρ_A = C C†`.
    pub fn reduced_a(&self) -> DensityOperator {
        let c = self.coefficients();
        DensityOperator { matrix: &c * c.adjoint(), dims: vec![self.dim_a()] }
    }

    /// `ρ_B = (C† C)^T`.
    pub fn reduced_b(&self) -> DensityOperator {
        let c = self.coefficients();
        DensityOperator { matrix: (c.adjoint() * &c).transpose(), dims: vec![self.dim_b()] }
    }

    /// Rank of the reduced state and its Schmidt spectrum.
    pub fn spectrum_a(&self) -> Spectrum {
        self.reduced_a().spectrum()
    }
}

/// Rank of a spectrum at the library tolerance; re-exported for callers
/// that only hold raw probabilities.
pub fn numerical_rank(values: &[f64]) -> usize {
    values.iter().filter(|&&p| p > RANK_TOLERANCE).count()
}
