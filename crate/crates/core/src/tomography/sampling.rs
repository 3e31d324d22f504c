use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use super::{pauli_settings, MeasurementSetting, Observations, PauliString, TomographyDataset};
use crate::error::{Error, Result};
use crate::state::DensityMatrix;

/// Counts per setting used when none is specified.
pub const DEFAULT_SHOTS: u64 = 700;

const SAMPLE_TAG: u64 = 0;
pub(crate) const BOOTSTRAP_TAG: u64 = 1;

/// Independent generator for one `(seed, purpose, trial, setting)` tuple.
pub(crate) fn substream(seed: u64, tag: u64, trial: u64, setting: usize) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&tag.to_le_bytes());
    key[16..24].copy_from_slice(&trial.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(setting as u64);
    rng
}

/// In-place fast Walsh–Hadamard transform: `out[S] = Σ_o v[o] (−1)^{|o∧S|}`.
pub(crate) fn walsh_hadamard(v: &mut [f64]) {
    let n = v.len();
    let mut h = 1;
    while h < n {
        for block in (0..n).step_by(2 * h) {
            for i in block..block + h {
                let (a, b) = (v[i], v[i + h]);
                v[i] = a + b;
                v[i + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// Outcome distribution of `setting` on `rho`.
pub fn exact_probabilities(rho: &DensityMatrix, setting: &MeasurementSetting) -> Result<Vec<f64>> {
    if rho.n_qubits() != setting.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: rho.n_qubits(),
            found: setting.n_qubits(),
        });
    }
    let dim = rho.dim();
    // parity expectations of every subset, then invert the Walsh transform
    let mut v: Vec<f64> = (0..dim)
        .map(|mask| setting.restricted(mask).expectation(rho.matrix()))
        .collect();
    walsh_hadamard(&mut v);
    Ok(normalize_probabilities(v.into_iter().map(|x| x / dim as f64).collect()))
}

/// Clears round-off negatives and renormalizes.
fn normalize_probabilities(mut p: Vec<f64>) -> Vec<f64> {
    p.iter_mut().for_each(|x| *x = x.max(0.0));
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= total);
    p
}

fn all_probabilities(rho: &DensityMatrix) -> Result<Vec<Vec<f64>>> {
    let n = rho.n_qubits();
    let dim = rho.dim();
    // tr(ρP) for every Pauli string, shared across settings
    let expectations: Vec<f64> = (0..dim * dim)
        .map(|i| PauliString::from_index(i, n).expectation(rho.matrix()))
        .collect();
    pauli_settings(n)?
        .iter()
        .map(|setting| {
            let mut v: Vec<f64> = (0..dim)
                .map(|mask| expectations[setting.restricted(mask).index()])
                .collect();
            walsh_hadamard(&mut v);
            Ok(normalize_probabilities(
                v.into_iter().map(|x| x / dim as f64).collect(),
            ))
        })
        .collect()
}

/// Multinomial draw of `shots` outcomes; zero-probability outcomes are never drawn.
pub(crate) fn multinomial(rng: &mut ChaCha8Rng, shots: u64, probs: &[f64]) -> Vec<u64> {
    let mut counts = vec![0u64; probs.len()];
    let Some(last) = probs.iter().rposition(|&p| p > 0.0) else {
        return counts;
    };
    let mut remaining = shots;
    let mut mass: f64 = probs[..=last].iter().sum();
    for (k, &p) in probs[..last].iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if p <= 0.0 {
            continue;
        }
        let q = (p / mass).clamp(0.0, 1.0);
        let c = Binomial::new(remaining, q)
            .expect("probability clamped to [0, 1]")
            .sample(rng);
        counts[k] = c;
        remaining -= c;
        mass -= p;
    }
    counts[last] = remaining;
    counts
}

/// Finite-shot record: `shots` multinomial samples per setting.
pub fn sample_dataset(rho: &DensityMatrix, shots: u64, seed: u64) -> Result<TomographyDataset> {
    if shots == 0 {
        return Err(Error::invalid("shots", "must be at least 1"));
    }
    let counts = all_probabilities(rho)?
        .iter()
        .enumerate()
        .map(|(s, p)| multinomial(&mut substream(seed, SAMPLE_TAG, 0, s), shots, p))
        .collect();
    Ok(TomographyDataset {
        n_qubits: rho.n_qubits(),
        shots_per_setting: shots,
        seed,
        observations: Observations::Counts(counts),
    })
}

/// Infinite-shot record holding the exact outcome probabilities.
pub fn exact_dataset(rho: &DensityMatrix) -> Result<TomographyDataset> {
    Ok(TomographyDataset {
        n_qubits: rho.n_qubits(),
        shots_per_setting: 0,
        seed: 0,
        observations: Observations::Exact(all_probabilities(rho)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::PureState;

    fn setting(s: &str) -> MeasurementSetting {
        s.parse().unwrap()
    }

    #[test]
    fn ghz_z_populations() {
        let ghz = PureState::ghz(6).unwrap().to_density();
        let p = exact_probabilities(&ghz, &setting("ZZZZZZ")).unwrap();
        for (o, &x) in p.iter().enumerate() {
            let want = if o == 0 || o == 63 { 0.5 } else { 0.0 };
            assert!((x - want).abs() < 1e-12);
        }
    }

    #[test]
    fn ghz_x_parity() {
        // brute force: rotate every qubit by H and read the diagonal
        let ghz = PureState::ghz(6).unwrap();
        let h = crate::linalg::CMatrix::from_row_major(vec![
            crate::C64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0),
            crate::C64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0),
            crate::C64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0),
            crate::C64::new(-core::f64::consts::FRAC_1_SQRT_2, 0.0),
        ])
        .unwrap();
        let mut rotated = ghz.clone();
        for q in 1..=6 {
            rotated = rotated.apply_gate(&h, &[q]).unwrap();
        }
        let p = exact_probabilities(&ghz.to_density(), &setting("XXXXXX")).unwrap();
        for (o, &x) in p.iter().enumerate() {
            assert!((x - rotated.amplitudes()[o].norm_sqr()).abs() < 1e-12);
            let want = if o.count_ones() % 2 == 0 { 1.0 / 32.0 } else { 0.0 };
            assert!((x - want).abs() < 1e-12);
        }
    }

    #[test]
    fn maximally_mixed_is_uniform() {
        let rho = DensityMatrix::maximally_mixed(3);
        for s in pauli_settings(3).unwrap() {
            for x in exact_probabilities(&rho, &s).unwrap() {
                assert!((x - 0.125).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn y_basis_of_plus_i() {
        // |+i⟩ gives outcome 0 with certainty in the Y basis
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let psi = PureState::new(vec![crate::C64::new(h, 0.0), crate::C64::new(0.0, h)]).unwrap();
        let p = exact_probabilities(&psi.to_density(), &setting("Y")).unwrap();
        assert!((p[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sampling_respects_support_and_seed() {
        let ghz = PureState::ghz(6).unwrap().to_density();
        let a = sample_dataset(&ghz, 700, 11).unwrap();
        let b = sample_dataset(&ghz, 700, 11).unwrap();
        assert_eq!(a, b);
        a.validate().unwrap();
        let Observations::Counts(counts) = &a.observations else { unreachable!() };
        let zz = &counts[setting("ZZZZZZ").index()];
        assert_eq!(zz[0] + zz[63], 700);
        let c = sample_dataset(&ghz, 700, 12).unwrap();
        assert_ne!(a, c);
        assert!(sample_dataset(&ghz, 0, 1).is_err());
    }

    #[test]
    fn frequencies_converge() {
        let rho = crate::darwinism::build_darwinism_state(&crate::DarwinismConfig::theta_b())
            .unwrap()
            .to_density();
        let shots = 1_000_000u64;
        let mut rng = substream(5, 0, 0, 0);
        for name in ["XYZXYZ", "ZZZZZX", "YYXXZZ"] {
            let p = exact_probabilities(&rho, &setting(name)).unwrap();
            let counts = multinomial(&mut rng, shots, &p);
            assert_eq!(counts.iter().sum::<u64>(), shots);
            for (c, q) in counts.iter().zip(&p) {
                let f = *c as f64 / shots as f64;
                assert!((f - q).abs() < 5.0 / (shots as f64).sqrt());
            }
        }
    }
}
