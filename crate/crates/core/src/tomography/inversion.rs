use alloc::vec;
use alloc::vec::Vec;

use super::sampling::walsh_hadamard;
use super::{MeasurementSetting, PauliString, TomographyDataset};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::state::{DensityMatrix, HermitianEstimate};

/// Empirical `⟨P⟩`, averaged uniformly over all settings that agree with `P` on its support.
pub fn pauli_expectation(dataset: &TomographyDataset, pauli: &PauliString) -> Result<f64> {
    dataset.validate()?;
    let n = dataset.n_qubits;
    if pauli.n_qubits() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: pauli.n_qubits(),
        });
    }
    let support = pauli.support();
    if support == 0 {
        return Ok(1.0);
    }
    let mut total = 0.0;
    let mut matches = 0usize;
    for s in 0..3usize.pow(n as u32) {
        let setting = MeasurementSetting::from_index(s, n);
        if setting.restricted(support).letters() != pauli.letters() {
            continue;
        }
        let parity: f64 = dataset
            .frequencies(s)
            .iter()
            .enumerate()
            .map(|(o, f)| if (o & support).count_ones() % 2 == 1 { -f } else { *f })
            .sum();
        total += parity;
        matches += 1;
    }
    Ok(total / matches as f64)
}

/// Every `⟨P⟩`, indexed by [`PauliString::index`].
fn all_expectations(dataset: &TomographyDataset) -> Vec<f64> {
    let n = dataset.n_qubits;
    let dim = 1usize << n;
    let mut sums = vec![0.0; dim * dim];
    let mut hits = vec![0u32; dim * dim];
    for s in 0..3usize.pow(n as u32) {
        let setting = MeasurementSetting::from_index(s, n);
        let mut parities = dataset.frequencies(s);
        walsh_hadamard(&mut parities);
        for (mask, parity) in parities.into_iter().enumerate() {
            let p = setting.restricted(mask).index();
            sums[p] += parity;
            hits[p] += 1;
        }
    }
    sums.iter().zip(&hits).map(|(s, &h)| s / h as f64).collect()
}

/// `ρ̂ = 2^{-n} Σ_P ⟨P⟩ P` over all `4^n` Pauli strings.
pub fn linear_inversion(dataset: &TomographyDataset) -> Result<HermitianEstimate> {
    dataset.validate()?;
    let n = dataset.n_qubits;
    let dim = 1usize << n;
    let expectations = all_expectations(dataset);
    let mut m = CMatrix::zeros(dim);
    for (idx, &e) in expectations.iter().enumerate() {
        if e == 0.0 {
            continue;
        }
        let p = PauliString::from_index(idx, n);
        for r in 0..dim {
            let (c, v) = p.row_entry(r);
            m[(r, c)] += v * e;
        }
    }
    HermitianEstimate::new(m.scale_real(1.0 / dim as f64).hermitian_part())
}

/// Closest probability vector (Euclidean) to a unit-sum spectrum.
///
/// Walks the spectrum from the smallest value up; while the running value
/// is negative it is zeroed and its mass spread evenly over the values not
/// yet visited. Input order is preserved.
pub fn mle_project_spectrum(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let mut sorted: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let mut remaining = sorted.len();
    let mut debt = 0.0;
    while remaining > 0 && sorted[remaining - 1] + debt / (remaining as f64) < 0.0 {
        debt += sorted[remaining - 1];
        sorted[remaining - 1] = 0.0;
        remaining -= 1;
    }
    if remaining > 0 {
        let share = debt / remaining as f64;
        sorted[..remaining].iter_mut().for_each(|v| *v += share);
    }
    let mut out = vec![0.0; values.len()];
    for (k, &i) in order.iter().enumerate() {
        out[i] = sorted[k];
    }
    out
}

/// Nearest density matrix in Frobenius norm to a unit-trace Hermitian estimate.
pub fn mle_project(est: &HermitianEstimate) -> Result<DensityMatrix> {
    let eig = linalg::hermitian_eigen(est.matrix())?;
    let mut values = eig.values.clone();
    // absorb the estimate's trace error before projecting
    let trace: f64 = values.iter().sum();
    let shift = (1.0 - trace) / values.len() as f64;
    values.iter_mut().for_each(|v| *v += shift);
    let projected = mle_project_spectrum(&values);
    Ok(DensityMatrix::new_unchecked(
        eig.reassemble(&projected).hermitian_part(),
    ))
}

/// Linear inversion followed by the physical projection.
pub fn reconstruct(dataset: &TomographyDataset) -> Result<DensityMatrix> {
    mle_project(&linear_inversion(dataset)?)
}
