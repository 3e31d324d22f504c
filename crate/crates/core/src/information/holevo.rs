use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Euclid;

use super::optimize::nelder_mead_2d;
use super::Fragment;
use crate::entropy::{matrix_entropy, spectrum_entropy};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64};
use crate::state::{self, DensityMatrix};

/// Outcomes less likely than this carry no information.
pub const NEGLIGIBLE_PROBABILITY: f64 = 1e-12;

/// Rank-one projective measurement `{|m₀⟩⟨m₀|, |m₁⟩⟨m₁|}` on the system qubit,
/// with `|m₀⟩ = cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩` and `|m₁⟩` orthogonal to it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementBasis {
    theta_m: f64,
    phi_m: f64,
}

impl MeasurementBasis {
    /// Pointer (computational) basis.
    pub const Z: MeasurementBasis = MeasurementBasis {
        theta_m: 0.0,
        phi_m: 0.0,
    };
    pub const X: MeasurementBasis = MeasurementBasis {
        theta_m: PI / 2.0,
        phi_m: 0.0,
    };
    pub const Y: MeasurementBasis = MeasurementBasis {
        theta_m: PI / 2.0,
        phi_m: PI / 2.0,
    };

    /// Requires `θ ∈ [0, π]` and `φ ∈ [0, 2π)`.
    pub fn new(theta_m: f64, phi_m: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta_m) {
            return Err(Error::invalid("theta_m", "must lie in [0, pi]"));
        }
        if !(0.0..2.0 * PI).contains(&phi_m) {
            return Err(Error::invalid("phi_m", "must lie in [0, 2pi)"));
        }
        Ok(MeasurementBasis { theta_m, phi_m })
    }

    /// Maps any Bloch angles onto the canonical ranges, keeping the same projector.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let two_pi = 2.0 * PI;
        let mut theta = Euclid::rem_euclid(&theta, &two_pi);
        let mut phi = phi;
        if theta > PI {
            theta = two_pi - theta;
            phi += PI;
        }
        let mut phi = Euclid::rem_euclid(&phi, &two_pi);
        if phi >= two_pi {
            phi = 0.0;
        }
        MeasurementBasis {
            theta_m: theta,
            phi_m: phi,
        }
    }

    pub fn theta_m(&self) -> f64 {
        self.theta_m
    }

    pub fn phi_m(&self) -> f64 {
        self.phi_m
    }

    /// `(|m₀⟩, |m₁⟩)` as amplitude pairs.
    pub fn vectors(&self) -> ([C64; 2], [C64; 2]) {
        let (s, c) = (self.theta_m / 2.0).sin_cos();
        let e = C64::from_polar(1.0, self.phi_m);
        (
            [C64::new(c, 0.0), e * s],
            [-e.conj() * s, C64::new(c, 0.0)],
        )
    }
}

/// One measurement outcome on the system and the fragment state it leaves behind.
#[derive(Debug, Clone, PartialEq)]
pub struct Conditional {
    pub probability: f64,
    /// `None` when the outcome is negligible (`p < 1e-12`).
    pub state: Option<DensityMatrix>,
}

/// `{(p_s, ρ_{F|s})}` for the two outcomes of a system measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalEnsemble {
    pub entries: Vec<Conditional>,
}

impl ConditionalEnsemble {
    /// `Σ_s p_s ρ_{F|s}`
    pub fn average(&self) -> Option<CMatrix> {
        let mut iter = self.entries.iter().filter_map(|e| {
            e.state
                .as_ref()
                .map(|s| s.matrix().scale_real(e.probability))
        });
        let first = iter.next()?;
        Some(iter.fold(first, |acc, m| acc.add(&m)))
    }
}

/// Reduced state on `S ∪ F` cut into its system blocks `ρ_ij = ⟨i|ρ_SF|j⟩_S`.
struct SplitState {
    d: usize,
    r00: CMatrix,
    r01: CMatrix,
    r11: CMatrix,
    rho_f: CMatrix,
    h_f: f64,
}

impl SplitState {
    fn new(rho: &DensityMatrix, fragment: &Fragment) -> Result<Self> {
        let sf = state::partial_trace(rho, &fragment.with_system())?;
        let m = sf.matrix();
        let d = m.dim() / 2;
        let r00 = CMatrix::from_fn(d, |r, c| m[(r, c)]);
        let r01 = CMatrix::from_fn(d, |r, c| m[(r, c + d)]);
        let r11 = CMatrix::from_fn(d, |r, c| m[(r + d, c + d)]);
        let rho_f = r00.add(&r11);
        let h_f = matrix_entropy(rho_f.clone());
        Ok(SplitState {
            d,
            r00,
            r01,
            r11,
            rho_f,
            h_f,
        })
    }

    /// Unnormalized fragment states `⟨m₀|ρ|m₀⟩` and `⟨m₁|ρ|m₁⟩`.
    fn conditionals(&self, basis: &MeasurementBasis) -> (CMatrix, CMatrix) {
        let (s, c) = (basis.theta_m / 2.0).sin_cos();
        let e = C64::from_polar(c * s, basis.phi_m);
        let (cc, ss) = (c * c, s * s);
        let sigma0 = CMatrix::from_fn(self.d, |r, col| {
            self.r00[(r, col)] * cc
                + self.r11[(r, col)] * ss
                + self.r01[(r, col)] * e
                + self.r01[(col, r)].conj() * e.conj()
        });
        let sigma1 = self.rho_f.sub(&sigma0);
        (sigma0, sigma1)
    }

    fn holevo(&self, basis: &MeasurementBasis) -> f64 {
        let (sigma0, sigma1) = self.conditionals(basis);
        let mut chi = self.h_f;
        for sigma in [sigma0, sigma1] {
            let p = sigma.trace().re;
            if p < NEGLIGIBLE_PROBABILITY {
                continue;
            }
            let spectrum: Vec<f64> = linalg::eigenvalues_unchecked(sigma)
                .into_iter()
                .map(|l| l / p)
                .collect();
            chi -= p * spectrum_entropy(&spectrum);
        }
        chi.max(0.0)
    }
}

/// Fragment states conditioned on each outcome of `basis` on the system.
pub fn conditional_ensemble(
    rho: &DensityMatrix,
    fragment: &Fragment,
    basis: &MeasurementBasis,
) -> Result<ConditionalEnsemble> {
    let split = SplitState::new(rho, fragment)?;
    let (sigma0, sigma1) = split.conditionals(basis);
    let entries = [sigma0, sigma1]
        .into_iter()
        .map(|sigma| {
            let p = sigma.trace().re;
            let state = (p >= NEGLIGIBLE_PROBABILITY)
                .then(|| DensityMatrix::new_unchecked(sigma.scale_real(1.0 / p).hermitian_part()));
            Conditional {
                probability: p.max(0.0),
                state,
            }
        })
        .collect();
    Ok(ConditionalEnsemble { entries })
}

/// `H(Σ p_s ρ_{F|s}) − Σ p_s H(ρ_{F|s})` for one system measurement.
pub fn holevo_from_basis(
    rho: &DensityMatrix,
    fragment: &Fragment,
    basis: &MeasurementBasis,
) -> Result<f64> {
    Ok(SplitState::new(rho, fragment)?.holevo(basis))
}

/// Search settings for [`holevo_bound`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolevoOptions {
    /// Points per axis of the coarse `(θ, φ)` grid; at least 8.
    pub grid_size: usize,
    /// Iteration budget of the simplex refinement.
    pub refine_iters: usize,
    /// Simplex size at which refinement stops.
    pub step_tol: f64,
}

impl Default for HolevoOptions {
    fn default() -> Self {
        HolevoOptions {
            grid_size: 64,
            refine_iters: 200,
            step_tol: 1e-6,
        }
    }
}

impl HolevoOptions {
    pub fn with_grid(grid_size: usize) -> Self {
        HolevoOptions {
            grid_size,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolevoResult {
    /// Best value found; never above the projective optimum.
    pub value: f64,
    pub argmax: MeasurementBasis,
    pub evals: usize,
}

/// Maximizes the Holevo quantity over projective measurements on the system.
///
/// A `grid_size × grid_size` grid over `θ ∈ [0, π]`, `φ ∈ [0, π)` (the other
/// half of the sphere repeats the same bases) seeds a Nelder–Mead
/// refinement. Grid ties go to the lexicographically smallest `(θ, φ)`.
pub fn holevo_bound(
    rho: &DensityMatrix,
    fragment: &Fragment,
    opts: &HolevoOptions,
) -> Result<HolevoResult> {
    if opts.grid_size < 8 {
        return Err(Error::invalid("grid_size", "must be at least 8"));
    }
    let split = SplitState::new(rho, fragment)?;
    let g = opts.grid_size;
    let dtheta = PI / (g - 1) as f64;
    let dphi = PI / g as f64;

    let mut best = (f64::NEG_INFINITY, MeasurementBasis::Z);
    let mut evals = 0;
    for i in 0..g {
        let theta = if i == g - 1 { PI } else { i as f64 * dtheta };
        for j in 0..g {
            let basis = MeasurementBasis {
                theta_m: theta,
                phi_m: j as f64 * dphi,
            };
            let chi = split.holevo(&basis);
            evals += 1;
            if chi > best.0 {
                best = (chi, basis);
            }
        }
    }

    let refined = nelder_mead_2d(
        |[theta, phi]| -split.holevo(&MeasurementBasis::from_angles(theta, phi)),
        [best.1.theta_m, best.1.phi_m],
        dtheta,
        opts.step_tol,
        opts.refine_iters,
    );
    evals += refined.evals;
    if -refined.value > best.0 {
        best = (
            -refined.value,
            MeasurementBasis::from_angles(refined.x[0], refined.x[1]),
        );
    }
    Ok(HolevoResult {
        value: best.0,
        argmax: best.1,
        evals,
    })
}
