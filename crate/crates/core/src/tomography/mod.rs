//! Simulated Pauli tomography.
//!
//! Every qubit is measured in one of the `X`, `Y`, `Z` eigenbases, giving
//! `3^n` settings. Each setting records outcome counts indexed like basis
//! states (qubit 1 most significant); a `0` bit is the `+1` eigenvalue of
//! that qubit's Pauli operator.
//!
//! The estimation chain is [`linear_inversion`] followed by
//! [`mle_project`], and [`bootstrap`] resamples the record to obtain error
//! bars on any scalar functional of the estimate.

mod bootstrap;
mod inversion;
mod pauli;
mod sampling;

pub use bootstrap::{bootstrap, bootstrap_dataset, bootstrap_trial, scalar_errorbar, ErrorBar, Functional};
pub use inversion::{
    linear_inversion, mle_project, mle_project_spectrum, pauli_expectation, reconstruct,
};
pub use pauli::{Pauli, PauliString};
pub use sampling::{exact_dataset, exact_probabilities, sample_dataset, DEFAULT_SHOTS};

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// Largest register accepted by the tomography routines.
pub const MAX_TOMOGRAPHY_QUBITS: usize = 8;

/// Measurement basis of each qubit; position `k` is qubit `k + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MeasurementSetting {
    bases: Vec<Pauli>,
}

impl MeasurementSetting {
    pub fn new(bases: Vec<Pauli>) -> Result<Self> {
        if bases.is_empty() || bases.len() > MAX_TOMOGRAPHY_QUBITS {
            return Err(Error::invalid("setting", "must name 1..=8 qubits"));
        }
        if bases.contains(&Pauli::I) {
            return Err(Error::invalid("setting", "bases must be X, Y or Z"));
        }
        Ok(MeasurementSetting { bases })
    }

    /// The `index`-th setting in lexicographic order (`X < Y < Z`).
    pub fn from_index(index: usize, n_qubits: usize) -> Self {
        let mut bases = alloc::vec![Pauli::X; n_qubits];
        let mut rest = index;
        for b in bases.iter_mut().rev() {
            *b = [Pauli::X, Pauli::Y, Pauli::Z][rest % 3];
            rest /= 3;
        }
        MeasurementSetting { bases }
    }

    /// Position in lexicographic order.
    pub fn index(&self) -> usize {
        self.bases
            .iter()
            .fold(0, |acc, b| acc * 3 + (*b as usize - 1))
    }

    pub fn bases(&self) -> &[Pauli] {
        &self.bases
    }

    pub fn n_qubits(&self) -> usize {
        self.bases.len()
    }

    /// Pauli string measured by the parity of the qubits in `mask` (basis-index bits).
    pub(crate) fn restricted(&self, mask: usize) -> PauliString {
        let n = self.bases.len();
        let letters = self
            .bases
            .iter()
            .enumerate()
            .map(|(k, &b)| if mask >> (n - 1 - k) & 1 == 1 { b } else { Pauli::I })
            .collect();
        PauliString::from_letters(letters)
    }
}

impl fmt::Display for MeasurementSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bases {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for MeasurementSetting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bases = s.chars().map(Pauli::try_from).collect::<Result<Vec<_>>>()?;
        Self::new(bases)
    }
}

/// All `3^n` settings in lexicographic order.
pub fn pauli_settings(n: usize) -> Result<Vec<MeasurementSetting>> {
    if !(1..=MAX_TOMOGRAPHY_QUBITS).contains(&n) {
        return Err(Error::invalid("n_qubits", "must lie in 1..=8"));
    }
    Ok((0..3usize.pow(n as u32))
        .map(|i| MeasurementSetting::from_index(i, n))
        .collect())
}

/// Per-setting measurement record, indexed by setting position.
#[derive(Debug, Clone, PartialEq)]
pub enum Observations {
    /// Integer outcome counts from finite sampling.
    Counts(Vec<Vec<u64>>),
    /// Exact outcome probabilities (the infinite-shot limit).
    Exact(Vec<Vec<f64>>),
}

impl Observations {
    fn len(&self) -> usize {
        match self {
            Observations::Counts(c) => c.len(),
            Observations::Exact(f) => f.len(),
        }
    }
}

/// Outcome record for every Pauli setting of an `n_qubits` register.
#[derive(Debug, Clone, PartialEq)]
pub struct TomographyDataset {
    pub n_qubits: usize,
    /// Zero for exact-probability records.
    pub shots_per_setting: u64,
    pub seed: u64,
    pub observations: Observations,
}

impl TomographyDataset {
    /// Checks completeness and per-setting normalization.
    pub fn validate(&self) -> Result<()> {
        let n = self.n_qubits;
        if !(1..=MAX_TOMOGRAPHY_QUBITS).contains(&n) {
            return Err(Error::invalid("n_qubits", "must lie in 1..=8"));
        }
        let settings = 3usize.pow(n as u32);
        let outcomes = 1usize << n;
        let incomplete = |reason: String| Err(Error::IncompleteDataset { reason });
        if self.observations.len() != settings {
            return incomplete(alloc::format!(
                "{} of {settings} settings present",
                self.observations.len()
            ));
        }
        match &self.observations {
            Observations::Counts(counts) => {
                if self.shots_per_setting == 0 {
                    return incomplete("integer counts need shots_per_setting >= 1".into());
                }
                for (i, c) in counts.iter().enumerate() {
                    if c.len() != outcomes {
                        return incomplete(alloc::format!(
                            "setting {} has {} outcomes, expected {outcomes}",
                            MeasurementSetting::from_index(i, n),
                            c.len()
                        ));
                    }
                    let total: u64 = c.iter().sum();
                    if total != self.shots_per_setting {
                        return incomplete(alloc::format!(
                            "setting {} has {total} counts, expected {}",
                            MeasurementSetting::from_index(i, n),
                            self.shots_per_setting
                        ));
                    }
                }
            }
            Observations::Exact(freqs) => {
                if self.shots_per_setting != 0 {
                    return incomplete("exact records need shots_per_setting = 0".into());
                }
                for (i, f) in freqs.iter().enumerate() {
                    let total: f64 = f.iter().sum();
                    if f.len() != outcomes
                        || (total - 1.0).abs() > 1e-9
                        || f.iter().any(|&x| !(x >= 0.0))
                    {
                        return incomplete(alloc::format!(
                            "setting {} is not a probability vector over {outcomes} outcomes",
                            MeasurementSetting::from_index(i, n)
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.observations, Observations::Exact(_))
    }

    /// Relative outcome frequencies of one setting.
    pub fn frequencies(&self, setting: usize) -> Vec<f64> {
        match &self.observations {
            Observations::Counts(c) => {
                let shots = self.shots_per_setting as f64;
                c[setting].iter().map(|&k| k as f64 / shots).collect()
            }
            Observations::Exact(f) => f[setting].clone(),
        }
    }
}
