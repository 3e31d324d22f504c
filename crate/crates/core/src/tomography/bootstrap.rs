use alloc::vec::Vec;

use super::sampling::{multinomial, substream, BOOTSTRAP_TAG};
use super::{reconstruct, Observations, TomographyDataset};
use crate::error::{Error, Result};
use crate::information::{self, Fragment, HolevoOptions};
use crate::state::{self, DensityMatrix, PureState};

/// Parametric resample of a finite-shot record: each setting is redrawn
/// multinomially from its own empirical frequencies.
pub fn bootstrap_dataset(dataset: &TomographyDataset, seed: u64, trial: u64) -> Result<TomographyDataset> {
    dataset.validate()?;
    let Observations::Counts(counts) = &dataset.observations else {
        return Err(Error::invalid(
            "bootstrap",
            "exact-probability records have no shot noise to resample",
        ));
    };
    let shots = dataset.shots_per_setting;
    let resampled = counts
        .iter()
        .enumerate()
        .map(|(s, c)| {
            let freqs: Vec<f64> = c.iter().map(|&k| k as f64 / shots as f64).collect();
            multinomial(&mut substream(seed, BOOTSTRAP_TAG, trial, s), shots, &freqs)
        })
        .collect();
    Ok(TomographyDataset {
        n_qubits: dataset.n_qubits,
        shots_per_setting: shots,
        seed: dataset.seed,
        observations: Observations::Counts(resampled),
    })
}

/// Reconstruction from bootstrap trial `trial`; depends only on `(dataset, seed, trial)`.
pub fn bootstrap_trial(dataset: &TomographyDataset, seed: u64, trial: u64) -> Result<DensityMatrix> {
    reconstruct(&bootstrap_dataset(dataset, seed, trial)?)
}

/// `trials` bootstrap reconstructions, in trial order.
pub fn bootstrap(dataset: &TomographyDataset, trials: usize, seed: u64) -> Result<Vec<DensityMatrix>> {
    if trials < 2 {
        return Err(Error::invalid("trials", "must be at least 2"));
    }
    (0..trials as u64)
        .map(|t| bootstrap_trial(dataset, seed, t))
        .collect()
}

/// Scalar read off each member of a bootstrap ensemble.
#[derive(Debug, Clone)]
pub enum Functional {
    /// `⟨ψ|ρ|ψ⟩` against a pure target.
    Fidelity(PureState),
    Purity,
    /// Pointer-basis coherence of the system qubit.
    Coherence,
    MutualInfo(Fragment),
    Holevo(Fragment, HolevoOptions),
}

impl Functional {
    pub fn evaluate(&self, rho: &DensityMatrix) -> Result<f64> {
        match self {
            Functional::Fidelity(target) => state::fidelity_pure(rho, target),
            Functional::Purity => Ok(state::purity(rho)),
            Functional::Coherence => information::coherence(&information::system_state(rho)?),
            Functional::MutualInfo(f) => information::mutual_information(rho, f),
            Functional::Holevo(f, opts) => Ok(information::holevo_bound(rho, f, opts)?.value),
        }
    }
}

/// Sample mean and `(n − 1)`-denominator standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBar {
    pub mean: f64,
    pub std_dev: f64,
}

impl ErrorBar {
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyEnsemble);
        }
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let std_dev = if samples.len() < 2 {
            0.0
        } else {
            (samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)).sqrt()
        };
        Ok(ErrorBar { mean, std_dev })
    }
}

pub fn scalar_errorbar(ensemble: &[DensityMatrix], functional: &Functional) -> Result<ErrorBar> {
    if ensemble.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    let values = ensemble
        .iter()
        .map(|rho| functional.evaluate(rho))
        .collect::<Result<Vec<_>>>()?;
    ErrorBar::from_samples(&values)
}
