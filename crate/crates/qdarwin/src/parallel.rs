//! Rayon drivers for the per-fragment and per-trial loops.
//!
//! Each work item is a pure function of its index, and results are collected
//! in index order, so outputs do not depend on the number of threads.

use qdarwin_core::information::{self, CorrelationReport, CurvePoint, Fragment, HolevoOptions};
use qdarwin_core::tomography::{self, ErrorBar, Functional};
use qdarwin_core::{DensityMatrix, TomographyDataset};
use rayon::prelude::*;

use crate::error::{CliError, Result};

pub const THREADS_VAR: &str = "QDARWIN_THREADS";

/// Thread cap from `QDARWIN_THREADS`; `None` leaves the choice to rayon.
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::invalid(
                THREADS_VAR,
                format!("{v:?} is not a positive integer"),
            )),
        },
    }
}

pub fn pool(threads: Option<usize>) -> rayon::ThreadPool {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        b = b.num_threads(n);
    }
    b.build().expect("thread pool construction")
}

/// Runs `f` on a pool with the given thread cap.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    pool(threads).install(f)
}

pub fn report_for(
    rho: &DensityMatrix,
    fragments: &[Fragment],
    opts: &HolevoOptions,
) -> Result<CorrelationReport> {
    let rows = fragments
        .par_iter()
        .map(|f| information::fragment_row(rho, f, opts))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(information::assemble_report(rho, rows)?)
}

pub fn full_report(rho: &DensityMatrix, opts: &HolevoOptions) -> Result<CorrelationReport> {
    let n_env = rho.n_qubits().saturating_sub(1);
    if n_env == 0 {
        return Err(CliError::invalid("state", "needs at least one environment qubit"));
    }
    let fragments = information::enumerate_fragments(n_env)?;
    report_for(rho, &fragments, opts)
}

pub fn accumulation_curve(
    rho: &DensityMatrix,
    order: &[usize],
    opts: &HolevoOptions,
) -> Result<Vec<CurvePoint>> {
    let fragments = information::prefix_fragments(order, rho.n_qubits())?;
    let report = report_for(rho, &fragments, opts)?;
    Ok(report
        .rows
        .iter()
        .map(|r| CurvePoint {
            size: r.fragment.len(),
            mutual_info: r.mutual_info,
            holevo: r.holevo,
            discord: r.discord,
        })
        .collect())
}

/// Parallel counterpart of [`tomography::bootstrap`], with identical output.
pub fn bootstrap(data: &TomographyDataset, trials: usize, seed: u64) -> Result<Vec<DensityMatrix>> {
    if trials < 2 {
        return Err(CliError::invalid("trials", "must be at least 2"));
    }
    Ok((0..trials as u64)
        .into_par_iter()
        .map(|t| tomography::bootstrap_trial(data, seed, t))
        .collect::<std::result::Result<Vec<_>, _>>()?)
}

pub fn errorbar(ensemble: &[DensityMatrix], functional: &Functional) -> Result<ErrorBar> {
    let values = ensemble
        .par_iter()
        .map(|rho| functional.evaluate(rho))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(ErrorBar::from_samples(&values)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qdarwin_core::darwinism::{build_darwinism_state, DarwinismConfig};
    use qdarwin_core::tomography::sample_dataset;
    use qdarwin_core::PureState;

    #[test]
    fn parallel_report_matches_serial() {
        let rho = build_darwinism_state(&DarwinismConfig::theta_b())
            .unwrap()
            .to_density();
        let opts = HolevoOptions::with_grid(16);
        let serial = information::full_report(&rho, &opts).unwrap();
        for t in [1, 3] {
            assert_eq!(with_threads(Some(t), || full_report(&rho, &opts)).unwrap(), serial);
        }
        let curve = with_threads(Some(2), || accumulation_curve(&rho, &[5, 6, 2, 3, 4], &opts)).unwrap();
        assert_eq!(
            curve,
            information::accumulation_curve(&rho, &[5, 6, 2, 3, 4], &opts).unwrap()
        );
    }

    #[test]
    fn parallel_bootstrap_matches_serial() {
        let rho = PureState::ghz(2).unwrap().to_density();
        let data = sample_dataset(&rho, 100, 5).unwrap();
        let serial = tomography::bootstrap(&data, 6, 2).unwrap();
        assert_eq!(with_threads(Some(3), || bootstrap(&data, 6, 2)).unwrap(), serial);
        assert!(bootstrap(&data, 1, 2).is_err());
    }
}
