//! JSON and CSV file formats.
//!
//! Every reader validates the type invariants of what it builds, so a file
//! that parses is always safe to hand to the core library.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use qdarwin_core::darwinism::{DarwinismConfig, NoiseSpec, NoiseStrength};
use qdarwin_core::information::{CorrelationReport, CurvePoint};
use qdarwin_core::{
    CMatrix, DensityMatrix, MeasurementSetting, Observations, PureState, State, TomographyDataset,
    C64,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Largest register a state file may describe (a 4^16-entry density matrix is already impractical).
pub const MAX_STATE_QUBITS: usize = 16;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let bytes = read_bytes(path)?;
    serde_json::from_slice(&bytes).map_err(|source| CliError::Json {
        path: path.to_owned(),
        source,
    })
}

pub fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| CliError::Json {
        path: path.to_owned(),
        source,
    })?;
    text.push('\n');
    write_text(path, &text)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Density,
}

/// `{"n_qubits", "kind", "data": [[re, im], …]}`; density data is row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub n_qubits: usize,
    pub kind: StateKind,
    pub data: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<String>,
}

fn pairs(values: &[C64]) -> Vec<[f64; 2]> {
    values.iter().map(|z| [z.re, z.im]).collect()
}

fn complex(pairs: &[[f64; 2]]) -> Vec<C64> {
    pairs.iter().map(|&[re, im]| C64::new(re, im)).collect()
}

impl StateFile {
    pub fn from_state(state: &State) -> Self {
        match state {
            State::Pure(p) => StateFile {
                n_qubits: p.n_qubits(),
                kind: StateKind::Pure,
                data: pairs(p.amplitudes()),
                manifest: None,
            },
            State::Density(d) => StateFile {
                n_qubits: d.n_qubits(),
                kind: StateKind::Density,
                data: pairs(d.matrix().as_slice()),
                manifest: None,
            },
        }
    }

    pub fn into_state(self) -> Result<State> {
        let n = self.n_qubits;
        if !(1..=MAX_STATE_QUBITS).contains(&n) {
            return Err(CliError::invalid(
                "n_qubits",
                format!("{n} is outside 1..={MAX_STATE_QUBITS}"),
            ));
        }
        if self.data.iter().flatten().any(|x| !x.is_finite()) {
            return Err(CliError::invalid("data", "entries must be finite"));
        }
        let expected = match self.kind {
            StateKind::Pure => 1usize << n,
            StateKind::Density => 1usize << (2 * n),
        };
        if self.data.len() != expected {
            return Err(CliError::invalid(
                "data",
                format!("{} entries, expected {expected} for {n} qubits", self.data.len()),
            ));
        }
        let values = complex(&self.data);
        Ok(match self.kind {
            StateKind::Pure => State::Pure(PureState::new(values)?),
            StateKind::Density => {
                State::Density(DensityMatrix::new(CMatrix::from_row_major(values)?)?)
            }
        })
    }
}

pub fn read_state(path: &Path) -> Result<State> {
    read_json::<StateFile>(path)?.into_state()
}

/// Noise block of a configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseFile {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_purity: Option<f64>,
}

impl Default for NoiseFile {
    fn default() -> Self {
        NoiseFile {
            kind: "none".into(),
            p: None,
            target_purity: None,
        }
    }
}

impl NoiseFile {
    pub fn from_spec(spec: NoiseSpec) -> Self {
        let (kind, strength) = match spec {
            NoiseSpec::None => return NoiseFile::default(),
            NoiseSpec::Depolarizing(s) => ("depolarizing", s),
            NoiseSpec::Dephasing(s) => ("dephasing", s),
        };
        let (p, target_purity) = match strength {
            NoiseStrength::P(p) => (Some(p), None),
            NoiseStrength::TargetPurity(t) => (None, Some(t)),
        };
        NoiseFile {
            kind: kind.into(),
            p,
            target_purity,
        }
    }

    pub fn to_spec(&self) -> Result<NoiseSpec> {
        let strength = || match (self.p, self.target_purity) {
            (Some(p), None) => Ok(NoiseStrength::P(p)),
            (None, Some(t)) => Ok(NoiseStrength::TargetPurity(t)),
            (None, None) => Err(CliError::invalid(
                "noise.p",
                format!("{} noise needs either p or target_purity", self.kind),
            )),
            (Some(_), Some(_)) => Err(CliError::invalid(
                "noise.target_purity",
                "give either p or target_purity, not both",
            )),
        };
        match self.kind.as_str() {
            "none" => {
                if self.p.is_some() || self.target_purity.is_some() {
                    return Err(CliError::invalid("noise.kind", "\"none\" takes no strength"));
                }
                Ok(NoiseSpec::None)
            }
            "depolarizing" => Ok(NoiseSpec::Depolarizing(strength()?)),
            "dephasing" => Ok(NoiseSpec::Dephasing(strength()?)),
            other => Err(CliError::invalid(
                "noise.kind",
                format!("unknown kind {other:?}; expected none, depolarizing or dephasing"),
            )),
        }
    }
}

/// Simulation configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub alpha: [f64; 2],
    pub beta: [f64; 2],
    pub thetas_deg: Vec<f64>,
    #[serde(default)]
    pub noise: NoiseFile,
    #[serde(default)]
    pub seed: u64,
}

impl ConfigFile {
    pub fn from_config(cfg: &DarwinismConfig) -> Self {
        ConfigFile {
            alpha: [cfg.alpha.re, cfg.alpha.im],
            beta: [cfg.beta.re, cfg.beta.im],
            thetas_deg: cfg.thetas_deg.clone(),
            noise: NoiseFile::from_spec(cfg.noise),
            seed: cfg.seed,
        }
    }

    pub fn to_config(&self) -> Result<DarwinismConfig> {
        let cfg = DarwinismConfig {
            alpha: C64::new(self.alpha[0], self.alpha[1]),
            beta: C64::new(self.beta[0], self.beta[1]),
            thetas_deg: self.thetas_deg.clone(),
            noise: self.noise.to_spec()?,
            seed: self.seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn read_config(path: &Path) -> Result<DarwinismConfig> {
    read_json::<ConfigFile>(path)?.to_config()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub fragment: Vec<usize>,
    #[serde(rename = "I")]
    pub mutual_info: f64,
    pub holevo: f64,
    pub discord: f64,
    /// Optimal system measurement `[θ_m, φ_m]`.
    pub argmax: [f64; 2],
}

/// Serialized [`CorrelationReport`] plus the redundancy read off it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub system_entropy: f64,
    pub classical_entropy: f64,
    pub coherence: f64,
    pub rows: Vec<ReportRow>,
    pub delta: f64,
    /// Smallest fragment size reaching `(1 − δ)·H_cl(ρ_S)`; `null` if none does.
    pub redundancy: Option<usize>,
    pub holevo_grid: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<String>,
}

impl ReportFile {
    pub fn new(report: &CorrelationReport, delta: f64, holevo_grid: usize) -> Result<Self> {
        Ok(ReportFile {
            system_entropy: report.system_entropy,
            classical_entropy: report.system_classical_entropy,
            coherence: report.coherence,
            rows: report
                .rows
                .iter()
                .map(|r| ReportRow {
                    fragment: r.fragment.members().to_vec(),
                    mutual_info: r.mutual_info,
                    holevo: r.holevo,
                    discord: r.discord,
                    argmax: [r.argmax.theta_m(), r.argmax.phi_m()],
                })
                .collect(),
            delta,
            redundancy: report.redundancy(delta)?,
            holevo_grid,
            manifest: None,
        })
    }
}

fn fragment_label(members: &[usize]) -> String {
    let sep = if members.iter().any(|&m| m > 9) { "-" } else { "" };
    members
        .iter()
        .map(|m| m.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

/// `fragment,size,I_bits,holevo_bits,discord_bits`, one line per row.
pub fn report_csv(report: &ReportFile) -> String {
    let mut out = String::from("fragment,size,I_bits,holevo_bits,discord_bits\n");
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fragment_label(&r.fragment),
            r.fragment.len(),
            r.mutual_info,
            r.holevo,
            r.discord
        );
    }
    out
}

/// `prefix_len,fragment,I_bits,holevo_bits,discord_bits` along an ordering.
pub fn curve_csv(order: &[usize], points: &[CurvePoint]) -> String {
    let mut out = String::from("prefix_len,fragment,I_bits,holevo_bits,discord_bits\n");
    for p in points {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            p.size,
            fragment_label(&order[..p.size]),
            p.mutual_info,
            p.holevo,
            p.discord
        );
    }
    out
}

/// Integer counts or exact probabilities for one setting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OutcomeVector {
    Counts(Vec<u64>),
    Probabilities(Vec<f64>),
}

/// Tomography record keyed by setting string (`"XXXXXZ"`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetFile {
    pub n_qubits: usize,
    pub shots_per_setting: u64,
    pub seed: u64,
    pub counts: BTreeMap<String, OutcomeVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<String>,
}

impl DatasetFile {
    pub fn from_dataset(data: &TomographyDataset) -> Self {
        let key = |i: usize| MeasurementSetting::from_index(i, data.n_qubits).to_string();
        let counts = match &data.observations {
            Observations::Counts(c) => c
                .iter()
                .enumerate()
                .map(|(i, v)| (key(i), OutcomeVector::Counts(v.clone())))
                .collect(),
            Observations::Exact(f) => f
                .iter()
                .enumerate()
                .map(|(i, v)| (key(i), OutcomeVector::Probabilities(v.clone())))
                .collect(),
        };
        DatasetFile {
            n_qubits: data.n_qubits,
            shots_per_setting: data.shots_per_setting,
            seed: data.seed,
            counts,
            manifest: None,
        }
    }

    pub fn into_dataset(self) -> Result<TomographyDataset> {
        let n = self.n_qubits;
        if !(1..=qdarwin_core::tomography::MAX_TOMOGRAPHY_QUBITS).contains(&n) {
            return Err(CliError::invalid("n_qubits", format!("{n} is outside 1..=8")));
        }
        let settings = 3usize.pow(n as u32);
        let mut slots: Vec<Option<OutcomeVector>> = vec![None; settings];
        for (key, v) in self.counts {
            let setting: MeasurementSetting = key
                .parse()
                .map_err(|e| CliError::invalid(format!("counts.{key}"), format!("{e}")))?;
            if setting.n_qubits() != n {
                return Err(CliError::invalid(
                    format!("counts.{key}"),
                    format!("setting has {} letters, expected {n}", setting.n_qubits()),
                ));
            }
            slots[setting.index()] = Some(v);
        }
        if let Some(missing) = slots.iter().position(Option::is_none) {
            return Err(CliError::invalid(
                "counts",
                format!(
                    "setting {} is missing",
                    MeasurementSetting::from_index(missing, n)
                ),
            ));
        }
        let vectors = slots.into_iter().flatten();
        let observations = if self.shots_per_setting == 0 {
            Observations::Exact(
                vectors
                    .map(|v| match v {
                        OutcomeVector::Counts(c) => c.into_iter().map(|k| k as f64).collect(),
                        OutcomeVector::Probabilities(p) => p,
                    })
                    .collect(),
            )
        } else {
            Observations::Counts(
                vectors
                    .map(|v| match v {
                        OutcomeVector::Counts(c) => Ok(c),
                        OutcomeVector::Probabilities(_) => Err(CliError::invalid(
                            "counts",
                            "finite-shot records need integer counts",
                        )),
                    })
                    .collect::<Result<_>>()?,
            )
        };
        let data = TomographyDataset {
            n_qubits: n,
            shots_per_setting: self.shots_per_setting,
            seed: self.seed,
            observations,
        };
        data.validate()?;
        Ok(data)
    }
}

pub fn read_dataset(path: &Path) -> Result<TomographyDataset> {
    read_json::<DatasetFile>(path)?.into_dataset()
}

#[cfg(test)]
mod tests {
    use super::*;
    use qdarwin_core::darwinism::{build_darwinism_state, simulate};
    use qdarwin_core::tomography::{exact_dataset, sample_dataset};

    #[test]
    fn state_roundtrip_is_exact() {
        let cfg = DarwinismConfig::theta_b();
        let pure = State::Pure(build_darwinism_state(&cfg).unwrap());
        let noisy = simulate(&cfg.with_noise(NoiseSpec::Depolarizing(NoiseStrength::P(0.3)))).unwrap();
        for s in [pure, noisy] {
            let text = serde_json::to_string(&StateFile::from_state(&s)).unwrap();
            let back: StateFile = serde_json::from_str(&text).unwrap();
            assert_eq!(back.into_state().unwrap(), s);
        }
    }

    #[test]
    fn state_reader_rejects_invariant_violations() {
        let bad = |json: &str| serde_json::from_str::<StateFile>(json).unwrap().into_state();
        assert!(bad(r#"{"n_qubits":1,"kind":"pure","data":[[1,0],[1,0]]}"#).is_err());
        assert!(bad(r#"{"n_qubits":2,"kind":"pure","data":[[1,0],[0,0]]}"#).is_err());
        // trace 1 but a negative eigenvalue
        assert!(bad(r#"{"n_qubits":1,"kind":"density","data":[[1.5,0],[0,0],[0,0],[-0.5,0]]}"#).is_err());
        // not Hermitian
        assert!(bad(r#"{"n_qubits":1,"kind":"density","data":[[0.5,0],[0.1,0],[0,0],[0.5,0]]}"#).is_err());
        assert!(bad(r#"{"n_qubits":0,"kind":"pure","data":[[1,0]]}"#).is_err());
        assert!(serde_json::from_str::<StateFile>(r#"{"n_qubits":1,"kind":"mixed","data":[]}"#).is_err());
    }

    #[test]
    fn config_errors_name_the_field() {
        let err = serde_json::from_str::<ConfigFile>(r#"{"alpha":[1,0],"beta":[0,0]}"#).unwrap_err();
        assert!(err.to_string().contains("thetas_deg"), "{err}");

        let cfg: ConfigFile = serde_json::from_str(
            r#"{"alpha":[0.6,0],"beta":[0.8,0],"thetas_deg":[90],"noise":{"kind":"dephasing"}}"#,
        )
        .unwrap();
        assert!(cfg.to_config().unwrap_err().to_string().contains("noise.p"));

        let cfg: ConfigFile =
            serde_json::from_str(r#"{"alpha":[1,0],"beta":[1,0],"thetas_deg":[90]}"#).unwrap();
        assert!(cfg.to_config().unwrap_err().to_string().contains("alpha"));
    }

    #[test]
    fn config_roundtrip() {
        for noise in [
            NoiseSpec::None,
            NoiseSpec::Depolarizing(NoiseStrength::TargetPurity(0.692)),
            NoiseSpec::Dephasing(NoiseStrength::P(0.1)),
        ] {
            let cfg = DarwinismConfig::theta_b().with_noise(noise);
            let text = serde_json::to_string(&ConfigFile::from_config(&cfg)).unwrap();
            let back: ConfigFile = serde_json::from_str(&text).unwrap();
            assert_eq!(back.to_config().unwrap(), cfg);
        }
    }

    #[test]
    fn dataset_roundtrip_both_modes() {
        let rho = PureState::ghz(3).unwrap().to_density();
        for data in [sample_dataset(&rho, 50, 3).unwrap(), exact_dataset(&rho).unwrap()] {
            let file = DatasetFile::from_dataset(&data);
            assert_eq!(file.counts.len(), 27);
            assert!(file.counts.contains_key("XYZ"));
            let text = serde_json::to_string(&file).unwrap();
            let back: DatasetFile = serde_json::from_str(&text).unwrap();
            assert_eq!(back.into_dataset().unwrap(), data);
        }
    }

    #[test]
    fn dataset_reader_checks_completeness() {
        let rho = PureState::ghz(2).unwrap().to_density();
        let mut file = DatasetFile::from_dataset(&sample_dataset(&rho, 10, 0).unwrap());
        file.counts.remove("ZZ");
        assert!(file.clone().into_dataset().unwrap_err().to_string().contains("ZZ"));
        file.counts.insert("ZZ".into(), OutcomeVector::Counts(vec![5, 0, 0, 4]));
        assert!(file.clone().into_dataset().is_err());
        file.counts.insert("ZZ".into(), OutcomeVector::Counts(vec![5, 0, 0, 5]));
        assert!(file.clone().into_dataset().is_ok());
        file.counts.insert("ZQ".into(), OutcomeVector::Counts(vec![5, 0, 0, 5]));
        assert!(file.into_dataset().is_err());
    }

    #[test]
    fn csv_labels() {
        assert_eq!(fragment_label(&[2, 5]), "25");
        assert_eq!(fragment_label(&[2, 11]), "2-11");
    }
}
