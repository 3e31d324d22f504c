//! Dense simulation and analysis of quantum Darwinism.
//!
//! A central system qubit is coupled to `N` environment qubits through
//! controlled rotations, producing branch states of the form
//! `α|0⟩⊗|0…0⟩ + β|1⟩⊗(⊗ᵢ R_y(θᵢ)|0⟩)`. The crate measures how much of the
//! system's classical information ends up in environment fragments (mutual
//! information, Holevo quantity, discord) and simulates the Pauli-tomography
//! chain used to estimate such states from finite measurement records.
//!
//! Qubits are labelled from 1, and qubit 1 (the system) is the most
//! significant bit of every basis index.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod darwinism;
pub mod entropy;
mod error;
pub mod information;
pub mod linalg;
pub mod state;
pub mod tomography;

pub use darwinism::{DarwinismConfig, NoiseSpec, NoiseStrength};
pub use error::{Error, Result};
pub use information::{CorrelationReport, Fragment, HolevoOptions, MeasurementBasis};
pub use linalg::{CMatrix, C64};
pub use state::{DensityMatrix, HermitianEstimate, PureState, State};
pub use tomography::{MeasurementSetting, Observations, TomographyDataset};

/// Version of this crate, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
