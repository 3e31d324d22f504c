use alloc::vec::Vec;

use super::holevo::{holevo_bound, HolevoOptions, MeasurementBasis};
use super::{enumerate_fragments, mutual_information_given, system_state, Fragment};
use crate::entropy::{shannon_entropy, von_neumann_entropy};
use crate::error::{Error, Result};
use crate::state::DensityMatrix;

/// Fraction of the system's classical entropy left out by the default redundancy threshold.
pub const DEFAULT_DELTA: f64 = 0.3;

/// Optimizer slack tolerated before a negative discord is treated as a failure.
const DISCORD_FAILURE: f64 = -1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct FragmentCorrelation {
    pub fragment: Fragment,
    pub mutual_info: f64,
    pub holevo: f64,
    pub discord: f64,
    pub argmax: MeasurementBasis,
    pub optimizer_evals: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    pub system_entropy: f64,
    pub system_classical_entropy: f64,
    pub coherence: f64,
    pub rows: Vec<FragmentCorrelation>,
}

/// Mean correlations over fragments of one size, or over one prefix of an ordering.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub size: usize,
    pub mutual_info: f64,
    pub holevo: f64,
    pub discord: f64,
}

/// Splits `I` into its classical and quantum parts.
///
/// The optimizer only ever under-estimates `χ`, but round-off can push it a
/// hair above `I`; such values are capped at `I`. A gap beyond `1e-4` is an error.
fn split_information(mutual_info: f64, holevo: f64) -> Result<(f64, f64)> {
    let gap = mutual_info - holevo;
    if gap < DISCORD_FAILURE {
        return Err(Error::NegativeDiscord { value: gap });
    }
    let holevo = holevo.min(mutual_info);
    Ok((holevo, mutual_info - holevo))
}

/// `I`, `χ` and `D` between the system and one fragment.
pub fn fragment_row(
    rho: &DensityMatrix,
    fragment: &Fragment,
    opts: &HolevoOptions,
) -> Result<FragmentCorrelation> {
    let h_s = von_neumann_entropy(&system_state(rho)?);
    let mutual_info = mutual_information_given(rho, fragment, h_s)?;
    let chi = holevo_bound(rho, fragment, opts)?;
    let (holevo, discord) = split_information(mutual_info, chi.value)?;
    Ok(FragmentCorrelation {
        fragment: fragment.clone(),
        mutual_info,
        holevo,
        discord,
        argmax: chi.argmax,
        optimizer_evals: chi.evals,
    })
}

/// `D(S:F) = I(S:F) − χ(S:F)`
pub fn quantum_discord(rho: &DensityMatrix, fragment: &Fragment, opts: &HolevoOptions) -> Result<f64> {
    Ok(fragment_row(rho, fragment, opts)?.discord)
}

/// Wraps precomputed rows with the system-level quantities.
pub fn assemble_report(rho: &DensityMatrix, rows: Vec<FragmentCorrelation>) -> Result<CorrelationReport> {
    let rho_s = system_state(rho)?;
    let system_entropy = von_neumann_entropy(&rho_s);
    let system_classical_entropy = shannon_entropy(&rho_s.populations())?;
    Ok(CorrelationReport {
        system_entropy,
        system_classical_entropy,
        coherence: (system_classical_entropy - system_entropy).max(0.0),
        rows,
    })
}

/// Correlations for every nonempty environment fragment.
pub fn full_report(rho: &DensityMatrix, opts: &HolevoOptions) -> Result<CorrelationReport> {
    let fragments = enumerate_fragments(n_env(rho)?)?;
    report_for(rho, &fragments, opts)
}

/// Correlations for a chosen list of fragments, in the given order.
pub fn report_for(
    rho: &DensityMatrix,
    fragments: &[Fragment],
    opts: &HolevoOptions,
) -> Result<CorrelationReport> {
    let rows = fragments
        .iter()
        .map(|f| fragment_row(rho, f, opts))
        .collect::<Result<Vec<_>>>()?;
    assemble_report(rho, rows)
}

fn n_env(rho: &DensityMatrix) -> Result<usize> {
    match rho.n_qubits() {
        0 | 1 => Err(Error::invalid("state", "needs at least one environment qubit")),
        n => Ok(n - 1),
    }
}

impl CorrelationReport {
    /// Mean `I`, `χ`, `D` over all rows of each fragment size, for sizes present in the report.
    pub fn size_means(&self) -> Vec<CurvePoint> {
        let max = self.rows.iter().map(|r| r.fragment.len()).max().unwrap_or(0);
        (1..=max)
            .filter_map(|k| {
                let rows: Vec<_> = self.rows.iter().filter(|r| r.fragment.len() == k).collect();
                if rows.is_empty() {
                    return None;
                }
                let n = rows.len() as f64;
                Some(CurvePoint {
                    size: k,
                    mutual_info: rows.iter().map(|r| r.mutual_info).sum::<f64>() / n,
                    holevo: rows.iter().map(|r| r.holevo).sum::<f64>() / n,
                    discord: rows.iter().map(|r| r.discord).sum::<f64>() / n,
                })
            })
            .collect()
    }

    /// Smallest fragment size whose mean `I` reaches `(1 − δ)` of the system's classical entropy.
    pub fn redundancy(&self, delta: f64) -> Result<Option<usize>> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::invalid("delta", "must lie in (0, 1)"));
        }
        let target = (1.0 - delta) * self.system_classical_entropy;
        if target <= 0.0 {
            return Ok(None);
        }
        Ok(self
            .size_means()
            .iter()
            .find(|p| p.mutual_info >= target)
            .map(|p| p.size))
    }

    pub fn row(&self, members: &[usize]) -> Option<&FragmentCorrelation> {
        self.rows.iter().find(|r| r.fragment.members() == members)
    }
}

/// Mean `I`, `χ`, `D` over all fragments of each size `k = 1..=N`.
pub fn partial_information_curve(rho: &DensityMatrix, opts: &HolevoOptions) -> Result<Vec<CurvePoint>> {
    Ok(full_report(rho, opts)?.size_means())
}

/// Fragments `{o₁}, {o₁, o₂}, …` grown along `order`.
pub fn prefix_fragments(order: &[usize], n_qubits: usize) -> Result<Vec<Fragment>> {
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if n_qubits < 2 || sorted != (2..=n_qubits).collect::<Vec<_>>() {
        return Err(Error::NotAPermutation);
    }
    (1..=order.len())
        .map(|k| Fragment::new(order[..k].to_vec(), n_qubits))
        .collect()
}

/// `I`, `χ`, `D` as environment qubits are added one at a time in `order`.
pub fn accumulation_curve(
    rho: &DensityMatrix,
    order: &[usize],
    opts: &HolevoOptions,
) -> Result<Vec<CurvePoint>> {
    prefix_fragments(order, rho.n_qubits())?
        .iter()
        .map(|f| {
            let row = fragment_row(rho, f, opts)?;
            Ok(CurvePoint {
                size: f.len(),
                mutual_info: row.mutual_info,
                holevo: row.holevo,
                discord: row.discord,
            })
        })
        .collect()
}

/// [`CorrelationReport::redundancy`] on a freshly computed full report.
pub fn redundancy(rho: &DensityMatrix, delta: f64, opts: &HolevoOptions) -> Result<Option<usize>> {
    full_report(rho, opts)?.redundancy(delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::darwinism::{build_darwinism_state, DarwinismConfig};
    use crate::state::PureState;
    use alloc::vec;

    fn ideal(cfg: DarwinismConfig) -> DensityMatrix {
        build_darwinism_state(&cfg).unwrap().to_density()
    }

    fn frag(m: &[usize]) -> Fragment {
        Fragment::new(m.to_vec(), 6).unwrap()
    }

    fn fast() -> HolevoOptions {
        HolevoOptions::with_grid(16)
    }

    #[test]
    fn discord_examples() {
        let ghz = ideal(DarwinismConfig::theta_a());
        assert!(quantum_discord(&ghz, &frag(&[2]), &fast()).unwrap().abs() < 1e-6);
        let d = quantum_discord(&ghz, &frag(&[2, 3, 4, 5, 6]), &fast()).unwrap();
        assert!((d - 1.0).abs() < 1e-6);
        let bell = ideal(DarwinismConfig::balanced(vec![180.0]));
        let f = Fragment::new(vec![2], 2).unwrap();
        assert!((quantum_discord(&bell, &f, &fast()).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn split_caps_and_rejects() {
        assert_eq!(split_information(1.0, 1.0 + 1e-7).unwrap(), (1.0, 0.0));
        assert!(matches!(
            split_information(1.0, 1.001),
            Err(Error::NegativeDiscord { .. })
        ));
    }

    #[test]
    fn product_state_is_uncorrelated() {
        let plus = PureState::new(vec![crate::linalg::C64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0); 2]).unwrap();
        let psi = plus.tensor(&PureState::basis(3, 5).unwrap());
        let rho = psi.to_density();
        let report = full_report(&rho, &fast()).unwrap();
        assert_eq!(report.rows.len(), 7);
        for r in &report.rows {
            assert!(r.mutual_info.abs() < 1e-9 && r.holevo.abs() < 1e-9 && r.discord.abs() < 1e-9);
        }
        assert_eq!(report.redundancy(0.3).unwrap(), None);
        for p in report.size_means() {
            assert!(p.mutual_info.abs() < 1e-9);
        }
    }

    #[test]
    fn theta_b_singleton_curve() {
        let rho = ideal(DarwinismConfig::theta_b());
        let report = report_for(
            &rho,
            &[frag(&[2]), frag(&[3]), frag(&[4]), frag(&[5]), frag(&[6])],
            &fast(),
        )
        .unwrap();
        let means = report.size_means();
        assert_eq!(means.len(), 1);
        assert!((means[0].mutual_info - 0.826_311_451_720_004).abs() < 1e-9);
        assert_eq!(report.redundancy(0.3).unwrap(), Some(1));
        assert!(report.redundancy(1.0).is_err());
    }

    #[test]
    fn prefix_validation() {
        assert!(prefix_fragments(&[2, 3, 4, 5, 6], 6).is_ok());
        assert!(matches!(prefix_fragments(&[2, 3, 4, 5], 6), Err(Error::NotAPermutation)));
        assert!(matches!(prefix_fragments(&[2, 3, 4, 5, 5], 6), Err(Error::NotAPermutation)));
        assert!(matches!(prefix_fragments(&[1, 3, 4, 5, 6], 6), Err(Error::NotAPermutation)));
        let p = prefix_fragments(&[5, 6, 2, 3, 4], 6).unwrap();
        assert_eq!(p[1].members(), &[5, 6]);
    }

    #[test]
    fn theta_b_accumulation_start() {
        let rho = ideal(DarwinismConfig::theta_b());
        let curve = accumulation_curve(&rho, &[5, 6, 2, 3, 4], &fast()).unwrap();
        assert_eq!(curve.len(), 5);
        assert!((curve[0].mutual_info - 0.454_538_851_471_507).abs() < 1e-9);
        assert!((curve[1].mutual_info - 0.795_018_577_009_227).abs() < 1e-9);
    }
}
