//! Entropies in bits.

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::state::DensityMatrix;

/// Eigenvalues below this are treated as exactly zero.
pub const EIGEN_FLOOR: f64 = 1e-12;

/// `−Σ λ log₂ λ` over a spectrum, skipping values at or below [`EIGEN_FLOOR`].
pub fn spectrum_entropy(values: &[f64]) -> f64 {
    let h: f64 = values
        .iter()
        .filter(|&&l| l > EIGEN_FLOOR)
        .map(|&l| -l * l.log2())
        .sum();
    h.max(0.0)
}

/// `H(ρ) = −tr(ρ log₂ ρ)`
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    spectrum_entropy(&rho.eigenvalues())
}

/// Entropy of a matrix known to be Hermitian; used on unnormalized-free hot paths.
pub(crate) fn matrix_entropy(m: CMatrix) -> f64 {
    spectrum_entropy(&linalg::eigenvalues_unchecked(m))
}

/// Shannon entropy of a probability vector.
///
/// Entries down to `−1e-12` are clipped to zero and the vector renormalized;
/// a sum more than `1e-6` away from one is rejected.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > 1e-6 || !sum.is_finite() {
        return Err(Error::BadProbabilities { sum });
    }
    if let Some(&neg) = p.iter().find(|&&x| x < -EIGEN_FLOOR) {
        return Err(Error::invalid(
            "probabilities",
            alloc::format!("entry {neg:e} is negative"),
        ));
    }
    let clipped_sum: f64 = p.iter().map(|&x| x.max(0.0)).sum();
    let h: f64 = p
        .iter()
        .map(|&x| x.max(0.0) / clipped_sum)
        .filter(|&x| x > 0.0)
        .map(|x| -x * x.log2())
        .sum();
    Ok(h.max(0.0))
}
