//! Pure and mixed multi-qubit states.
//!
//! Qubits are labelled `1..=n`; qubit 1 is the most significant bit of a
//! basis index, so `|q1 q2 … qn⟩` has index `q1·2^(n-1) + … + qn`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64, ZERO};

/// Tolerance on the norm of a pure state and on density-matrix invariants.
pub const STATE_TOL: f64 = 1e-9;
/// Trace tolerance for linear-inversion estimates.
pub const ESTIMATE_TRACE_TOL: f64 = 1e-6;

/// Bit position (from the least significant end) of qubit `label` in an `n`-qubit index.
#[inline]
pub(crate) fn bit_of(label: usize, n: usize) -> usize {
    n - label
}

fn n_qubits_for(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::BadLength { len: dim });
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Normalized state vector on `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let n_qubits = n_qubits_for(amplitudes.len())?;
        let norm = norm(&amplitudes);
        if (norm - 1.0).abs() > STATE_TOL || norm.is_nan() {
            return Err(Error::NotNormalized { norm });
        }
        Ok(PureState {
            n_qubits,
            amplitudes,
        })
    }

    /// Normalizes `amplitudes` before wrapping them.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self> {
        n_qubits_for(amplitudes.len())?;
        let n = norm(&amplitudes);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized { norm: n });
        }
        amplitudes.iter_mut().for_each(|a| *a /= n);
        Self::new(amplitudes)
    }

    pub(crate) fn new_unchecked(amplitudes: Vec<C64>) -> Self {
        let n_qubits = amplitudes.len().trailing_zeros() as usize;
        PureState {
            n_qubits,
            amplitudes,
        }
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits >= usize::BITS as usize {
            return Err(Error::invalid("n_qubits", "must be at least 1"));
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::invalid("index", "outside the computational basis"));
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = linalg::ONE;
        Ok(Self::new_unchecked(amps))
    }

    /// `(|0…0⟩ + |1…1⟩)/√2`
    pub fn ghz(n_qubits: usize) -> Result<Self> {
        let mut s = Self::basis(n_qubits, 0)?;
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let last = s.dim() - 1;
        s.amplitudes[0] = C64::new(h, 0.0);
        s.amplitudes[last] = C64::new(h, 0.0);
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for &a in &self.amplitudes {
            amps.extend(other.amplitudes.iter().map(|&b| a * b));
        }
        Self::new_unchecked(amps)
    }

    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Applies a `2^k × 2^k` unitary to the listed qubits (first label = most significant gate bit).
    pub fn apply_gate(&self, gate: &CMatrix, targets: &[usize]) -> Result<PureState> {
        validate_targets(gate, targets, self.n_qubits)?;
        let n = self.n_qubits;
        let k = targets.len();
        let bits: Vec<usize> = targets.iter().map(|&t| bit_of(t, n)).collect();
        let mask: usize = bits.iter().map(|b| 1usize << b).sum();
        let spread = |sub: usize| -> usize {
            let mut idx = 0;
            for (j, &b) in bits.iter().enumerate() {
                if sub >> (k - 1 - j) & 1 == 1 {
                    idx |= 1 << b;
                }
            }
            idx
        };
        let offsets: Vec<usize> = (0..1usize << k).map(spread).collect();
        let mut out = vec![ZERO; self.dim()];
        let mut local = vec![ZERO; 1 << k];
        for base in (0..self.dim()).filter(|i| i & mask == 0) {
            for (l, &off) in local.iter_mut().zip(&offsets) {
                *l = self.amplitudes[base | off];
            }
            for (r, &off) in offsets.iter().enumerate() {
                out[base | off] = gate.row(r).iter().zip(&local).map(|(g, a)| g * a).sum();
            }
        }
        Ok(Self::new_unchecked(out))
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::new_unchecked(CMatrix::outer(&self.amplitudes, &self.amplitudes))
    }
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// `ρ = |ψ⟩⟨ψ|`
pub fn to_density(psi: &PureState) -> Result<DensityMatrix> {
    let norm = norm(psi.amplitudes());
    if (norm - 1.0).abs() > STATE_TOL {
        return Err(Error::NotNormalized { norm });
    }
    Ok(psi.to_density())
}

/// Trace-one Hermitian positive-semidefinite matrix on `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity, each to within `1e-9`.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let n_qubits = n_qubits_for(matrix.dim())?;
        check_hermitian_trace(&matrix, STATE_TOL)?;
        let min_eigenvalue = linalg::hermitian_eigenvalues(&matrix)?
            .last()
            .copied()
            .unwrap_or(0.0);
        if min_eigenvalue < -STATE_TOL {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(DensityMatrix { n_qubits, matrix })
    }

    pub(crate) fn new_unchecked(matrix: CMatrix) -> Self {
        let n_qubits = matrix.dim().trailing_zeros() as usize;
        DensityMatrix { n_qubits, matrix }
    }

    /// `I / 2^n`
    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        Self::new_unchecked(CMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        Self::new_unchecked(self.matrix.kron(&other.matrix))
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigenvalues_unchecked(self.matrix.clone())
    }

    /// Diagonal in the computational basis.
    pub fn populations(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|d| d.re).collect()
    }

    /// Reduced state on the qubits in `keep` (labels from 1), in ascending label order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        partial_trace(self, keep)
    }
}

impl From<&PureState> for DensityMatrix {
    fn from(psi: &PureState) -> Self {
        psi.to_density()
    }
}

/// Hermitian, unit-trace matrix that need not be positive, e.g. a linear-inversion estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEstimate {
    n_qubits: usize,
    matrix: CMatrix,
}

impl HermitianEstimate {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let n_qubits = n_qubits_for(matrix.dim())?;
        check_hermitian_trace(&matrix, ESTIMATE_TRACE_TOL)?;
        Ok(HermitianEstimate { n_qubits, matrix })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }
}

impl From<DensityMatrix> for HermitianEstimate {
    fn from(rho: DensityMatrix) -> Self {
        HermitianEstimate {
            n_qubits: rho.n_qubits,
            matrix: rho.matrix,
        }
    }
}

fn check_hermitian_trace(m: &CMatrix, trace_tol: f64) -> Result<()> {
    let deviation = m.hermitian_deviation();
    if deviation > STATE_TOL || deviation.is_nan() {
        return Err(Error::NotHermitian { deviation });
    }
    let trace = m.trace().re;
    if (trace - 1.0).abs() > trace_tol {
        return Err(Error::BadTrace { trace });
    }
    Ok(())
}

/// Either kind of state, as read from or written to a state file.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Pure(PureState),
    Density(DensityMatrix),
}

impl State {
    pub fn n_qubits(&self) -> usize {
        match self {
            State::Pure(p) => p.n_qubits(),
            State::Density(d) => d.n_qubits(),
        }
    }

    /// Kronecker product of two states of the same kind.
    pub fn tensor_product(&self, other: &State) -> Result<State> {
        match (self, other) {
            (State::Pure(a), State::Pure(b)) => Ok(State::Pure(a.tensor(b))),
            (State::Density(a), State::Density(b)) => Ok(State::Density(a.tensor(b))),
            _ => Err(Error::invalid(
                "tensor_product",
                "operands must both be pure states or both density matrices",
            )),
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        match self {
            State::Pure(p) => p.to_density(),
            State::Density(d) => d.clone(),
        }
    }
}

fn validate_labels(labels: &[usize], n_qubits: usize) -> Result<()> {
    if labels.is_empty() {
        return Err(Error::EmptySelection);
    }
    for (i, &q) in labels.iter().enumerate() {
        if q == 0 || q > n_qubits {
            return Err(Error::QubitOutOfRange { index: q, n_qubits });
        }
        if labels[..i].contains(&q) {
            return Err(Error::DuplicateQubit { index: q });
        }
    }
    Ok(())
}

/// Traces out every qubit not listed in `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n = rho.n_qubits();
    validate_labels(keep, n)?;
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    Ok(DensityMatrix::new_unchecked(trace_out_unchecked(
        &rho.matrix,
        n,
        &keep,
    )))
}

/// Partial trace on a raw matrix; `keep` must be sorted, distinct and in range.
pub(crate) fn trace_out_unchecked(m: &CMatrix, n: usize, keep: &[usize]) -> CMatrix {
    let k = keep.len();
    if k == n {
        return m.clone();
    }
    let kept_bits: Vec<usize> = keep.iter().map(|&q| bit_of(q, n)).collect();
    let traced_bits: Vec<usize> = (1..=n)
        .filter(|q| !keep.contains(q))
        .map(|q| bit_of(q, n))
        .collect();
    let expand = |sub: usize, bits: &[usize]| -> usize {
        let len = bits.len();
        bits.iter()
            .enumerate()
            .filter(|(j, _)| sub >> (len - 1 - j) & 1 == 1)
            .map(|(_, &b)| 1usize << b)
            .sum()
    };
    let kept_idx: Vec<usize> = (0..1usize << k).map(|s| expand(s, &kept_bits)).collect();
    let traced_idx: Vec<usize> = (0..1usize << traced_bits.len())
        .map(|s| expand(s, &traced_bits))
        .collect();
    CMatrix::from_fn(1 << k, |r, c| {
        let (ri, ci) = (kept_idx[r], kept_idx[c]);
        traced_idx.iter().map(|&t| m[(ri | t, ci | t)]).sum()
    })
}

/// `tr(ρ²)`
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.matrix.as_slice().iter().map(|x| x.norm_sqr()).sum()
}

/// `⟨ψ|ρ|ψ⟩`
pub fn fidelity_pure(rho: &DensityMatrix, target: &PureState) -> Result<f64> {
    if rho.dim() != target.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: target.dim(),
        });
    }
    let psi = target.amplitudes();
    let rho_psi = rho.matrix.mul_vec(psi);
    let f: C64 = psi.iter().zip(&rho_psi).map(|(a, b)| a.conj() * b).sum();
    Ok(f.re.clamp(0.0, 1.0))
}

fn validate_targets(gate: &CMatrix, targets: &[usize], n: usize) -> Result<()> {
    validate_labels(targets, n)?;
    if gate.dim() != 1usize << targets.len() {
        return Err(Error::DimensionMismatch {
            expected: 1 << targets.len(),
            found: gate.dim(),
        });
    }
    let deviation = gate.unitarity_deviation();
    if deviation > STATE_TOL || deviation.is_nan() {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(())
}

/// Lifts a gate on `targets` to the full `n`-qubit register.
pub fn embed_gate(gate: &CMatrix, targets: &[usize], n: usize) -> Result<CMatrix> {
    validate_targets(gate, targets, n)?;
    let k = targets.len();
    let bits: Vec<usize> = targets.iter().map(|&t| bit_of(t, n)).collect();
    let mask: usize = bits.iter().map(|b| 1usize << b).sum();
    let local = |idx: usize| -> usize {
        bits.iter()
            .fold(0, |acc, &b| (acc << 1) | (idx >> b & 1))
    };
    debug_assert_eq!(local(mask), (1 << k) - 1);
    Ok(CMatrix::from_fn(1 << n, |r, c| {
        if r & !mask != c & !mask {
            ZERO
        } else {
            gate[(local(r), local(c))]
        }
    }))
}
