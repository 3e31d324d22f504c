//! System–environment branch states and noise emulation.
//!
//! The system (qubit 1) starts in `α|0⟩ + β|1⟩`, every environment qubit in
//! `|0⟩`. Each environment qubit `i` is then hit by a controlled rotation
//! `|0⟩⟨0|⊗I + |1⟩⟨1|⊗R_y(θᵢ)` with the system as control, so the branch in
//! which the system is `|1⟩` carries a record `cos(θᵢ/2)|0⟩ + sin(θᵢ/2)|1⟩`
//! in every environment qubit.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::information::Fragment;
use crate::linalg::{self, pauli, CMatrix, C64, ONE, ZERO};
use crate::state::{self, DensityMatrix, PureState, State};

/// How strong a noise channel is: either directly or through the purity it must produce.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseStrength {
    /// Channel parameter `p ∈ [0, 1]`.
    P(f64),
    /// Purity of the output state, in `(1/dim, 1]`.
    TargetPurity(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum NoiseSpec {
    #[default]
    None,
    /// `p|ψ⟩⟨ψ| + (1 − p) I/dim`
    Depolarizing(NoiseStrength),
    /// Every qubit dephased in the computational basis: each off-diagonal entry
    /// is scaled by `(1 − p)` per differing bit.
    Dephasing(NoiseStrength),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DarwinismConfig {
    pub alpha: C64,
    pub beta: C64,
    /// One angle per environment qubit, in degrees.
    pub thetas_deg: Vec<f64>,
    pub noise: NoiseSpec,
    pub seed: u64,
}

impl DarwinismConfig {
    /// Equal superposition of the system with the given environment angles.
    pub fn balanced(thetas_deg: Vec<f64>) -> Self {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        DarwinismConfig {
            alpha: C64::new(h, 0.0),
            beta: C64::new(h, 0.0),
            thetas_deg,
            noise: NoiseSpec::None,
            seed: 0,
        }
    }

    /// Five perfect records: every environment qubit rotated by 180°.
    pub fn theta_a() -> Self {
        Self::balanced(vec![180.0; 5])
    }

    /// Three perfect and two partial records (72° and 100°).
    pub fn theta_b() -> Self {
        Self::balanced(vec![180.0, 180.0, 180.0, 72.0, 100.0])
    }

    /// Looks up a shipped preset by name (`theta_A` or `theta_B`).
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "theta_A" | "theta_a" | "A" => Some(Self::theta_a()),
            "theta_B" | "theta_b" | "B" => Some(Self::theta_b()),
            _ => None,
        }
    }

    pub fn with_noise(mut self, noise: NoiseSpec) -> Self {
        self.noise = noise;
        self
    }

    pub fn n_env(&self) -> usize {
        self.thetas_deg.len()
    }

    pub fn n_qubits(&self) -> usize {
        self.n_env() + 1
    }

    pub fn thetas_rad(&self) -> Vec<f64> {
        self.thetas_deg.iter().map(|d| d.to_radians()).collect()
    }

    /// Angle (radians) of the environment qubit with the given label (2..=N+1).
    pub fn theta_of(&self, label: usize) -> Option<f64> {
        label
            .checked_sub(2)
            .and_then(|i| self.thetas_deg.get(i))
            .map(|d| d.to_radians())
    }

    pub fn validate(&self) -> Result<()> {
        let norm = self.alpha.norm_sqr() + self.beta.norm_sqr();
        if (norm - 1.0).abs() > state::STATE_TOL || !norm.is_finite() {
            return Err(Error::invalid(
                "alpha/beta",
                alloc::format!("|alpha|^2 + |beta|^2 = {norm}, expected 1"),
            ));
        }
        if self.thetas_deg.is_empty() {
            return Err(Error::invalid("thetas_deg", "at least one environment qubit required"));
        }
        if self.thetas_deg.len() > 15 {
            return Err(Error::invalid("thetas_deg", "at most 15 environment qubits supported"));
        }
        if self.thetas_deg.iter().any(|t| !t.is_finite()) {
            return Err(Error::invalid("thetas_deg", "angles must be finite"));
        }
        match self.noise {
            NoiseSpec::None => {}
            NoiseSpec::Depolarizing(s) | NoiseSpec::Dephasing(s) => match s {
                NoiseStrength::P(p) if !(0.0..=1.0).contains(&p) => {
                    return Err(Error::invalid("noise.p", "must lie in [0, 1]"));
                }
                NoiseStrength::TargetPurity(t) if !(t > 0.0 && t <= 1.0) => {
                    return Err(Error::invalid("noise.target_purity", "must lie in (0, 1]"));
                }
                _ => {}
            },
        }
        Ok(())
    }
}

/// `R_y(θ) = exp(−iθσ_y/2)`, so `R_y(θ)|0⟩ = cos(θ/2)|0⟩ + sin(θ/2)|1⟩`.
pub fn ry(theta: f64) -> CMatrix {
    let (s, c) = (theta / 2.0).sin_cos();
    CMatrix::from_row_major(vec![
        C64::new(c, 0.0),
        C64::new(-s, 0.0),
        C64::new(s, 0.0),
        C64::new(c, 0.0),
    ])
    .expect("2x2")
}

/// `|0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ R_y(θ)`, control on the first qubit.
pub fn controlled_rotation(theta: f64) -> CMatrix {
    let r = ry(theta);
    CMatrix::from_fn(4, |row, col| match (row >> 1, col >> 1) {
        (0, 0) => {
            if row == col {
                ONE
            } else {
                ZERO
            }
        }
        (1, 1) => r[(row & 1, col & 1)],
        _ => ZERO,
    })
}

/// `exp(−i H Δt)` for the pointer-state coupling `H = g·A⊗σ_x` with
/// `A = (I − σ_z)/2` and `gΔt = θ/2`.
pub fn hamiltonian_gate(theta: f64) -> CMatrix {
    let a = pauli::i().sub(&pauli::z()).scale_real(0.5);
    let h = a.kron(&pauli::x());
    linalg::unitary_exp(&h, theta / 2.0).expect("coupling Hamiltonian is Hermitian")
}

/// Which two-qubit interaction drives the system–environment coupling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Coupling {
    #[default]
    ControlledRy,
    Hamiltonian,
}

impl Coupling {
    pub fn gate(self, theta: f64) -> CMatrix {
        match self {
            Coupling::ControlledRy => controlled_rotation(theta),
            Coupling::Hamiltonian => hamiltonian_gate(theta),
        }
    }
}

/// Runs the coupling circuit: one two-qubit gate from the system to each environment qubit.
pub fn build_with_coupling(cfg: &DarwinismConfig, coupling: Coupling) -> Result<PureState> {
    cfg.validate()?;
    let n = cfg.n_qubits();
    let system = PureState::new(vec![cfg.alpha, cfg.beta])?;
    let env = PureState::basis(cfg.n_env(), 0)?;
    let mut psi = system.tensor(&env);
    for (i, theta) in cfg.thetas_rad().into_iter().enumerate() {
        psi = psi.apply_gate(&coupling.gate(theta), &[1, i + 2])?;
    }
    debug_assert_eq!(psi.n_qubits(), n);
    Ok(psi)
}

/// Branch state produced by the controlled-`R_y` circuit.
pub fn build_darwinism_state(cfg: &DarwinismConfig) -> Result<PureState> {
    build_with_coupling(cfg, Coupling::ControlledRy)
}

/// The same state written down directly as `α|0⟩|0…0⟩ + β|1⟩⊗ᵢ(cos(θᵢ/2)|0⟩ + sin(θᵢ/2)|1⟩)`.
pub fn branch_state(cfg: &DarwinismConfig) -> Result<PureState> {
    cfg.validate()?;
    let mut record = vec![ONE];
    for theta in cfg.thetas_rad() {
        let (s, c) = (theta / 2.0).sin_cos();
        record = record
            .iter()
            .flat_map(|&a| [a * c, a * s])
            .collect();
    }
    let env_dim = record.len();
    let mut amps = vec![ZERO; 2 * env_dim];
    amps[0] = cfg.alpha;
    for (dst, r) in amps[env_dim..].iter_mut().zip(&record) {
        *dst = cfg.beta * r;
    }
    PureState::new(amps)
}

/// `⟨0_L|1_L⟩ = Πᵢ cos(θᵢ/2)` over the fragment; an empty fragment gives 1.
pub fn branch_overlap(cfg: &DarwinismConfig, fragment: &[usize]) -> Result<f64> {
    fragment.iter().try_fold(1.0, |acc, &label| {
        cfg.theta_of(label)
            .map(|t| acc * (t / 2.0).cos())
            .ok_or(Error::QubitOutOfRange {
                index: label,
                n_qubits: cfg.n_qubits(),
            })
    })
}

/// [`branch_overlap`] for a validated fragment.
pub fn fragment_overlap(cfg: &DarwinismConfig, fragment: &Fragment) -> Result<f64> {
    branch_overlap(cfg, fragment.members())
}

/// Depolarizing strength `p` with `p²(1 − 1/d) + 1/d = target_purity`.
pub fn calibrate_depolarizing(target_purity: f64, dim: usize) -> Result<f64> {
    let d = dim as f64;
    let floor = 1.0 / d;
    if dim < 2 || !(target_purity >= floor - 1e-12 && target_purity <= 1.0 + 1e-12) {
        return Err(Error::invalid(
            "target_purity",
            alloc::format!("must lie in [1/{dim}, 1]"),
        ));
    }
    let ratio = ((target_purity - floor) / (1.0 - floor)).clamp(0.0, 1.0);
    Ok(ratio.sqrt())
}

fn dephase(rho: &CMatrix, p: f64) -> CMatrix {
    let keep = 1.0 - p;
    let mut powers = vec![1.0; usize::BITS as usize + 1];
    for k in 1..powers.len() {
        powers[k] = powers[k - 1] * keep;
    }
    CMatrix::from_fn(rho.dim(), |r, c| {
        rho[(r, c)] * powers[(r ^ c).count_ones() as usize]
    })
}

/// Per-qubit dephasing strength giving the requested purity, by bisection.
pub fn calibrate_dephasing(state: &PureState, target_purity: f64) -> Result<f64> {
    let rho = state.to_density();
    let purity_at = |p: f64| -> f64 {
        dephase(rho.matrix(), p)
            .as_slice()
            .iter()
            .map(|x| x.norm_sqr())
            .sum()
    };
    let (hi_purity, lo_purity) = (purity_at(0.0), purity_at(1.0));
    if target_purity > hi_purity + 1e-12 || target_purity < lo_purity - 1e-12 {
        return Err(Error::invalid(
            "target_purity",
            alloc::format!("dephasing reaches only [{lo_purity}, {hi_purity}]"),
        ));
    }
    // purity is non-increasing in p
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if purity_at(mid) > target_purity {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Mixes a pure state through the requested channel.
pub fn apply_noise(state: &PureState, spec: NoiseSpec) -> Result<DensityMatrix> {
    let rho = state.to_density();
    let check_p = |p: f64| {
        if (0.0..=1.0).contains(&p) {
            Ok(p)
        } else {
            Err(Error::invalid("noise.p", "must lie in [0, 1]"))
        }
    };
    match spec {
        NoiseSpec::None => Ok(rho),
        NoiseSpec::Depolarizing(strength) => {
            let dim = state.dim();
            let p = match strength {
                NoiseStrength::P(p) => check_p(p)?,
                NoiseStrength::TargetPurity(t) => calibrate_depolarizing(t, dim)?,
            };
            let mixed = CMatrix::identity(dim).scale_real((1.0 - p) / dim as f64);
            Ok(DensityMatrix::new_unchecked(
                rho.matrix().scale_real(p).add(&mixed),
            ))
        }
        NoiseSpec::Dephasing(strength) => {
            let p = match strength {
                NoiseStrength::P(p) => check_p(p)?,
                NoiseStrength::TargetPurity(t) => calibrate_dephasing(state, t)?,
            };
            Ok(DensityMatrix::new_unchecked(dephase(rho.matrix(), p)))
        }
    }
}

/// Builds the configured state: pure when noiseless, a density matrix otherwise.
pub fn simulate(cfg: &DarwinismConfig) -> Result<State> {
    let psi = build_darwinism_state(cfg)?;
    Ok(match cfg.noise {
        NoiseSpec::None => State::Pure(psi),
        spec => State::Density(apply_noise(&psi, spec)?),
    })
}
