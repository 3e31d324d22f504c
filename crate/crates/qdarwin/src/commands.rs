//! The `simulate`, `analyze`, `curve` and `tomo` subcommands.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use qdarwin_core::darwinism::{self, DarwinismConfig};
use qdarwin_core::information::{self, Fragment, HolevoOptions, DEFAULT_DELTA};
use qdarwin_core::linalg;
use qdarwin_core::tomography::{self, ErrorBar, Functional, DEFAULT_SHOTS};
use qdarwin_core::{DensityMatrix, PureState, State};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::formats::{self, ConfigFile, DatasetFile, NoiseFile, ReportFile, StateFile};
use crate::manifest::{hash_parts, manifest_path, manifest_ref, RunManifest};
use crate::parallel;

/// Default number of bootstrap trials for finite-shot tomography.
pub const DEFAULT_TRIALS: usize = 100;

#[derive(Debug, Parser)]
#[command(name = "qdarwin", version, about = "Branch-state simulation, correlation analysis and tomography")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a system–environment state and write it as a state file.
    Simulate(SimulateArgs),
    /// Mutual information, Holevo quantity and discord for environment fragments.
    Analyze(AnalyzeArgs),
    /// Correlations as environment qubits are added in a given order.
    Curve(CurveArgs),
    /// Simulated Pauli tomography with bootstrap error bars.
    Tomo(TomoArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NoiseKind {
    None,
    Depolarizing,
    Dephasing,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Configuration file (JSON).
    #[arg(long, required_unless_present = "preset", conflicts_with = "preset")]
    pub config: Option<PathBuf>,
    /// Built-in configuration: theta_A or theta_B.
    #[arg(long)]
    pub preset: Option<String>,
    /// Replace the configured noise channel.
    #[arg(long, value_enum)]
    pub noise: Option<NoiseKind>,
    /// Channel parameter for --noise.
    #[arg(long, requires = "noise", conflicts_with = "target_purity")]
    pub p: Option<f64>,
    /// Output purity that calibrates --noise.
    #[arg(long, requires = "noise")]
    pub target_purity: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// State file (JSON).
    pub state: PathBuf,
    /// `all`, or comma-separated fragments such as `5,6` or `25,346`.
    #[arg(long, default_value = "all")]
    pub fragments: String,
    #[arg(long, default_value_t = HolevoOptions::default().grid_size)]
    pub holevo_grid: usize,
    /// Redundancy threshold: fragments must reach (1 − δ) of the system's classical entropy.
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    pub delta: f64,
    /// Report file (JSON).
    #[arg(long)]
    pub out: PathBuf,
    /// CSV mirror of the report; defaults to the --out path with a .csv extension.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// State file (JSON).
    pub state: PathBuf,
    /// Permutation of the environment labels, e.g. `23456` or `2,3,4,5,6`.
    #[arg(long)]
    pub order: String,
    #[arg(long, default_value_t = HolevoOptions::default().grid_size)]
    pub holevo_grid: usize,
    /// Curve table (CSV).
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TomoArgs {
    /// State file (JSON) to measure.
    pub state: PathBuf,
    /// Shots per Pauli setting; 0 uses exact outcome probabilities.
    #[arg(long, default_value_t = DEFAULT_SHOTS)]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Bootstrap trials (default 100 with finite shots, none in exact mode).
    #[arg(long)]
    pub bootstrap: Option<usize>,
    /// Pure reference state for the fidelity; defaults to the input state,
    /// or its dominant eigenvector if the input is mixed.
    #[arg(long)]
    pub target: Option<PathBuf>,
    /// Summary file (JSON); the reconstruction, dataset and manifest are written alongside.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(cli: Cli) -> Result<()> {
    let threads = parallel::threads_from_env()?;
    match cli.command {
        Command::Simulate(a) => simulate(&a).map(|_| ()),
        Command::Analyze(a) => parallel::with_threads(threads, || analyze(&a)).map(|_| ()),
        Command::Curve(a) => parallel::with_threads(threads, || curve(&a)).map(|_| ()),
        Command::Tomo(a) => parallel::with_threads(threads, || tomo(&a)).map(|_| ()),
    }
}

fn params_json<T: Serialize>(value: &T) -> Vec<u8> {
    serde_json::to_vec(value).expect("parameters serialize")
}

pub fn resolve_config(args: &SimulateArgs) -> Result<DarwinismConfig> {
    let mut cfg = match (&args.config, &args.preset) {
        (Some(path), _) => formats::read_config(path)?,
        (None, Some(name)) => DarwinismConfig::preset(name).ok_or_else(|| {
            CliError::invalid("preset", format!("unknown preset {name:?}; expected theta_A or theta_B"))
        })?,
        (None, None) => return Err(CliError::invalid("config", "give --config or --preset")),
    };
    if let Some(kind) = args.noise {
        let kind = match kind {
            NoiseKind::None => "none",
            NoiseKind::Depolarizing => "depolarizing",
            NoiseKind::Dephasing => "dephasing",
        };
        cfg.noise = NoiseFile {
            kind: kind.into(),
            p: args.p,
            target_purity: args.target_purity,
        }
        .to_spec()?;
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn simulate(args: &SimulateArgs) -> Result<State> {
    let mut manifest = RunManifest::start("simulate");
    let cfg = resolve_config(args)?;
    let resolved = ConfigFile::from_config(&cfg);
    manifest.config_hash = hash_parts([b"simulate".as_slice(), &params_json(&resolved)]);
    manifest.seed("config", cfg.seed);
    if let Some(c) = &args.config {
        manifest.inputs.push(c.clone());
    }

    let state = darwinism::simulate(&cfg)?;
    let mpath = manifest_path(&args.out);
    let mut file = StateFile::from_state(&state);
    file.manifest = Some(manifest_ref(&mpath));
    formats::write_json(&args.out, &file)?;
    manifest.outputs = vec![args.out.clone(), mpath.clone()];
    manifest.finish(&mpath)?;

    let rho = state.to_density();
    println!(
        "{}: {} qubits, {} state, purity {:.6}",
        args.out.display(),
        state.n_qubits(),
        if matches!(state, State::Pure(_)) { "pure" } else { "density" },
        qdarwin_core::state::purity(&rho)
    );
    Ok(state)
}

/// Parses one group of labels: `256`, `2-5-6`, or a single label.
///
/// Concatenated digits are only accepted while every label is a single digit.
fn parse_labels(token: &str, n_qubits: usize, field: &str) -> Result<Vec<usize>> {
    let bad = || CliError::invalid(field, format!("cannot read {token:?} as qubit labels"));
    let token = token.trim();
    if token.is_empty() {
        return Err(bad());
    }
    if token.contains('-') {
        return token
            .split('-')
            .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
            .collect();
    }
    if !token.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    if n_qubits <= 9 {
        Ok(token.bytes().map(|b| (b - b'0') as usize).collect())
    } else {
        Ok(vec![token.parse().map_err(|_| bad())?])
    }
}

pub fn parse_fragments(spec: &str, n_qubits: usize) -> Result<Vec<Fragment>> {
    if spec.trim() == "all" {
        if n_qubits < 2 {
            return Err(CliError::invalid("fragments", "state has no environment qubits"));
        }
        return Ok(information::enumerate_fragments(n_qubits - 1)?);
    }
    spec.split(',')
        .map(|tok| Ok(Fragment::new(parse_labels(tok, n_qubits, "fragments")?, n_qubits)?))
        .collect()
}

pub fn parse_order(spec: &str, n_qubits: usize) -> Result<Vec<usize>> {
    let order = if spec.contains(',') {
        spec.split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| CliError::invalid("order", format!("cannot read {t:?} as a label")))
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        parse_labels(spec, n_qubits, "order")?
    };
    // rejects anything that is not a permutation of 2..=n
    information::prefix_fragments(&order, n_qubits)?;
    Ok(order)
}

pub fn analyze(args: &AnalyzeArgs) -> Result<ReportFile> {
    let mut manifest = RunManifest::start("analyze");
    let bytes = formats::read_bytes(&args.state)?;
    let rho = formats::read_state(&args.state)?.to_density();
    let fragments = parse_fragments(&args.fragments, rho.n_qubits())?;
    let opts = HolevoOptions::with_grid(args.holevo_grid);
    manifest.config_hash = hash_parts([
        b"analyze".as_slice(),
        &bytes,
        &params_json(&(&args.fragments, args.holevo_grid, args.delta)),
    ]);
    manifest.inputs.push(args.state.clone());

    let report = parallel::report_for(&rho, &fragments, &opts)?;
    let mpath = manifest_path(&args.out);
    let mut file = ReportFile::new(&report, args.delta, args.holevo_grid)?;
    file.manifest = Some(manifest_ref(&mpath));
    let csv = args.csv.clone().unwrap_or_else(|| args.out.with_extension("csv"));
    formats::write_json(&args.out, &file)?;
    formats::write_text(&csv, &formats::report_csv(&file))?;
    manifest.outputs = vec![args.out.clone(), csv, mpath.clone()];
    manifest.finish(&mpath)?;

    println!(
        "{} fragments; H(S) = {:.6}, H_cl(S) = {:.6}, coherence = {:.6}, redundancy(δ = {}) = {}",
        file.rows.len(),
        file.system_entropy,
        file.classical_entropy,
        file.coherence,
        args.delta,
        file.redundancy.map_or("none".to_owned(), |k| k.to_string())
    );
    Ok(file)
}

pub fn curve(args: &CurveArgs) -> Result<String> {
    let mut manifest = RunManifest::start("curve");
    let bytes = formats::read_bytes(&args.state)?;
    let rho = formats::read_state(&args.state)?.to_density();
    let order = parse_order(&args.order, rho.n_qubits())?;
    let opts = HolevoOptions::with_grid(args.holevo_grid);
    manifest.config_hash = hash_parts([
        b"curve".as_slice(),
        &bytes,
        &params_json(&(&order, args.holevo_grid)),
    ]);
    manifest.inputs.push(args.state.clone());

    let points = parallel::accumulation_curve(&rho, &order, &opts)?;
    let csv = formats::curve_csv(&order, &points);
    formats::write_text(&args.out, &csv)?;
    let mpath = manifest_path(&args.out);
    manifest.outputs = vec![args.out.clone(), mpath.clone()];
    manifest.finish(&mpath)?;
    print!("{csv}");
    Ok(csv)
}

/// Point estimate from the reconstruction, with bootstrap statistics when available.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub bootstrap_mean: Option<f64>,
    pub std_dev: Option<f64>,
    /// `value ± std_dev`, rounded to the first significant digit of the spread.
    pub display: String,
}

impl Estimate {
    fn new(value: f64, bar: Option<ErrorBar>) -> Self {
        Estimate {
            value,
            bootstrap_mean: bar.map(|b| b.mean),
            std_dev: bar.map(|b| b.std_dev),
            display: format_pm(value, bar.map_or(0.0, |b| b.std_dev)),
        }
    }
}

/// `0.8591 ± 0.0023` → `"0.859 ± 0.002"`.
pub fn format_pm(value: f64, std_dev: f64) -> String {
    if !(std_dev > 0.0) || !std_dev.is_finite() {
        return format!("{value:.6} ± 0");
    }
    let digits = (-std_dev.log10().floor()).clamp(0.0, 12.0) as usize;
    format!("{value:.digits$} ± {std_dev:.digits$}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TomoSummary {
    pub n_qubits: usize,
    pub shots_per_setting: u64,
    pub seed: u64,
    pub bootstrap_trials: usize,
    pub fidelity: Estimate,
    pub purity: Estimate,
    pub coherence: Estimate,
    pub reconstructed_state: String,
    pub dataset: String,
    pub manifest: String,
}

fn dominant_eigenvector(rho: &DensityMatrix) -> Result<PureState> {
    let eig = linalg::hermitian_eigen(rho.matrix())?;
    Ok(PureState::normalized(eig.vector(0))?)
}

fn file_name(p: &Path) -> String {
    p.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default()
}

pub fn tomo(args: &TomoArgs) -> Result<TomoSummary> {
    let mut manifest = RunManifest::start("tomo");
    let bytes = formats::read_bytes(&args.state)?;
    let input = formats::read_state(&args.state)?;
    let rho = input.to_density();
    let trials = match (args.bootstrap, args.shots) {
        (Some(t), 0) if t > 0 => {
            return Err(CliError::invalid(
                "bootstrap",
                "exact mode (--shots 0) has no shot noise to bootstrap",
            ))
        }
        (Some(t), _) => t,
        (None, 0) => 0,
        (None, _) => DEFAULT_TRIALS,
    };
    if trials == 1 {
        return Err(CliError::invalid("bootstrap", "needs at least 2 trials"));
    }
    let mut hash_inputs = vec![b"tomo".to_vec(), bytes];
    let target = match (&args.target, &input) {
        (Some(path), _) => {
            hash_inputs.push(formats::read_bytes(path)?);
            manifest.inputs.push(path.clone());
            match formats::read_state(path)? {
                State::Pure(p) => p,
                State::Density(_) => {
                    return Err(CliError::invalid("target", "fidelity target must be a pure state"))
                }
            }
        }
        (None, State::Pure(p)) => p.clone(),
        (None, State::Density(d)) => dominant_eigenvector(d)?,
    };
    if target.n_qubits() != rho.n_qubits() {
        return Err(CliError::invalid("target", "qubit count differs from the measured state"));
    }
    hash_inputs.push(params_json(&(args.shots, args.seed, trials)));
    manifest.config_hash = hash_parts(hash_inputs.iter().map(Vec::as_slice));
    manifest.inputs.insert(0, args.state.clone());
    manifest.seed("sample", args.seed);
    manifest.seed("bootstrap", args.seed);

    let data = if args.shots == 0 {
        tomography::exact_dataset(&rho)?
    } else {
        tomography::sample_dataset(&rho, args.shots, args.seed)?
    };
    let recon = tomography::reconstruct(&data)?;
    let ensemble = if trials > 0 {
        parallel::bootstrap(&data, trials, args.seed)?
    } else {
        Vec::new()
    };
    let estimate = |f: Functional| -> Result<Estimate> {
        let value = f.evaluate(&recon)?;
        let bar = if ensemble.is_empty() {
            None
        } else {
            Some(parallel::errorbar(&ensemble, &f)?)
        };
        Ok(Estimate::new(value, bar))
    };

    let state_path = args.out.with_extension("state.json");
    let data_path = args.out.with_extension("dataset.json");
    let mpath = manifest_path(&args.out);
    let mref = manifest_ref(&mpath);
    let summary = TomoSummary {
        n_qubits: rho.n_qubits(),
        shots_per_setting: args.shots,
        seed: args.seed,
        bootstrap_trials: trials,
        fidelity: estimate(Functional::Fidelity(target))?,
        purity: estimate(Functional::Purity)?,
        coherence: estimate(Functional::Coherence)?,
        reconstructed_state: file_name(&state_path),
        dataset: file_name(&data_path),
        manifest: mref.clone(),
    };

    let mut sfile = StateFile::from_state(&State::Density(recon));
    sfile.manifest = Some(mref.clone());
    let mut dfile = DatasetFile::from_dataset(&data);
    dfile.manifest = Some(mref);
    formats::write_json(&state_path, &sfile)?;
    formats::write_json(&data_path, &dfile)?;
    formats::write_json(&args.out, &summary)?;
    manifest.outputs = vec![args.out.clone(), state_path, data_path, mpath.clone()];
    manifest.finish(&mpath)?;

    println!("fidelity  {}", summary.fidelity.display);
    println!("purity    {}", summary.purity.display);
    println!("coherence {}", summary.coherence.display);
    Ok(summary)
}
