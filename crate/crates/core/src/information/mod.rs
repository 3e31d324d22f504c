//! How much the environment knows about the system.
//!
//! Every quantity here is computed between the system (qubit 1) and a
//! [`Fragment`] of environment qubits:
//!
//! * mutual information `I(S:F) = H(S) + H(F) − H(SF)`,
//! * the Holevo quantity `χ(S:F)`, maximized over projective measurements on
//!   the system (see [`holevo_bound`]),
//! * discord `D = I − χ`,
//!
//! plus the pointer-basis coherence of the reduced system state.

mod holevo;
mod optimize;
mod report;

pub use holevo::{
    conditional_ensemble, holevo_bound, holevo_from_basis, ConditionalEnsemble, HolevoOptions,
    HolevoResult, MeasurementBasis,
};
pub use optimize::{nelder_mead_2d, SimplexResult};
pub use report::{
    accumulation_curve, assemble_report, fragment_row, full_report, partial_information_curve,
    prefix_fragments, quantum_discord, redundancy, report_for, CorrelationReport, CurvePoint,
    FragmentCorrelation, DEFAULT_DELTA,
};

use alloc::vec::Vec;
use core::fmt;

use crate::entropy::{shannon_entropy, von_neumann_entropy};
use crate::error::{Error, Result};
use crate::state::{self, DensityMatrix};

/// Label of the system qubit.
pub const SYSTEM: usize = 1;

/// Nonempty sorted set of environment qubit labels (each ≥ 2).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fragment {
    members: Vec<usize>,
}

impl Fragment {
    /// Validates against a register of `n_qubits` (system plus environment).
    pub fn new(mut members: Vec<usize>, n_qubits: usize) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptySelection);
        }
        if members.contains(&SYSTEM) {
            return Err(Error::FragmentContainsSystem);
        }
        members.sort_unstable();
        for w in members.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateQubit { index: w[0] });
            }
        }
        if let Some(&bad) = members.iter().find(|&&m| m == 0 || m > n_qubits) {
            return Err(Error::QubitOutOfRange {
                index: bad,
                n_qubits,
            });
        }
        Ok(Fragment { members })
    }

    /// All environment qubits of an `n_qubits` register.
    pub fn full_environment(n_qubits: usize) -> Result<Self> {
        Self::new((2..=n_qubits).collect(), n_qubits)
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_subset_of(&self, other: &Fragment) -> bool {
        self.members.iter().all(|m| other.members.contains(m))
    }

    /// `{1} ∪ F`, sorted.
    pub(crate) fn with_system(&self) -> Vec<usize> {
        let mut v = Vec::with_capacity(self.len() + 1);
        v.push(SYSTEM);
        v.extend_from_slice(&self.members);
        v
    }

    fn check_fits(&self, rho: &DensityMatrix) -> Result<()> {
        let n = rho.n_qubits();
        match self.members.last() {
            Some(&m) if m > n => Err(Error::QubitOutOfRange {
                index: m,
                n_qubits: n,
            }),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Fragment {
    /// Concatenated labels, e.g. `2345`; labels above 9 are separated by `-`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.members.iter().any(|&m| m > 9) { "-" } else { "" };
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(sep)?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// Every nonempty subset of the `n_env` environment qubits, ordered by size then lexicographically.
pub fn enumerate_fragments(n_env: usize) -> Result<Vec<Fragment>> {
    if !(1..=16).contains(&n_env) {
        return Err(Error::invalid("n_env", "must lie in 1..=16"));
    }
    let mut out: Vec<Fragment> = (1u32..1 << n_env)
        .map(|mask| Fragment {
            members: (0..n_env)
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| b + 2)
                .collect(),
        })
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.members.cmp(&b.members)));
    Ok(out)
}

/// Reduced state of the system qubit.
pub fn system_state(rho: &DensityMatrix) -> Result<DensityMatrix> {
    state::partial_trace(rho, &[SYSTEM])
}

/// `C(ρ_S) = H_cl(diag ρ_S) − H(ρ_S)` for a single-qubit state, in the computational (pointer) basis.
pub fn coherence(rho_s: &DensityMatrix) -> Result<f64> {
    if rho_s.n_qubits() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: rho_s.dim(),
        });
    }
    let h_cl = shannon_entropy(&rho_s.populations())?;
    Ok((h_cl - von_neumann_entropy(rho_s)).max(0.0))
}

/// `I(S:F) = H(ρ_S) + H(ρ_F) − H(ρ_SF)`
pub fn mutual_information(rho: &DensityMatrix, fragment: &Fragment) -> Result<f64> {
    fragment.check_fits(rho)?;
    let h_s = von_neumann_entropy(&system_state(rho)?);
    mutual_information_given(rho, fragment, h_s)
}

pub(crate) fn mutual_information_given(
    rho: &DensityMatrix,
    fragment: &Fragment,
    h_s: f64,
) -> Result<f64> {
    fragment.check_fits(rho)?;
    let h_f = von_neumann_entropy(&state::partial_trace(rho, fragment.members())?);
    let h_sf = von_neumann_entropy(&state::partial_trace(rho, &fragment.with_system())?);
    Ok((h_s + h_f - h_sf).max(0.0))
}
