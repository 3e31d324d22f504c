//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
//!
//! Reference values come from closed forms evaluated here, or from fixtures
//! frozen after an independent brute-force oracle run.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use qdarwin::parallel;
use qdarwin_core::darwinism::{
    self, branch_overlap, build_darwinism_state, build_with_coupling, Coupling,
};
use qdarwin_core::entropy::shannon_entropy;
use qdarwin_core::information::{self, mutual_information, CorrelationReport};
use qdarwin_core::linalg::{hermitian_eigen, CMatrix, C64};
use qdarwin_core::state::{fidelity_pure, purity};
use qdarwin_core::tomography::{self, mle_project, scalar_errorbar, Functional};
use qdarwin_core::{
    DarwinismConfig, DensityMatrix, Fragment, HermitianEstimate, HolevoOptions, NoiseSpec,
    NoiseStrength, PureState, State,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Size-1 → size-4 mean mutual-information gap of the depolarized θ_A state
/// (purity 0.777), from the brute-force numpy oracle.
const PLATEAU_GAP: f64 = 0.16029651300428838;

/// Fidelity of the 700-shot, seed-7 reconstruction of the 6-qubit GHZ state.
const GHZ_700_SEED_7_FIDELITY: f64 = 0.9691385169606463;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn merge(parts: Vec<Outcome>) -> Outcome {
    Outcome {
        pass: parts.iter().all(|o| o.pass),
        detail: parts
            .iter()
            .map(|o| format!("[{}] {}", if o.pass { "ok" } else { "FAIL" }, o.detail))
            .collect::<Vec<_>>()
            .join("; "),
    }
}

fn h2(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }
}

/// `I(S:F)` of an ideal balanced branch state: the two nonzero eigenvalues of
/// `ρ_F` and `ρ_SF` are `(1 ± Π cos(θᵢ/2))/2` over `F` and over its complement.
fn closed_form_mi(thetas_deg: &[f64], fragment: &[usize]) -> f64 {
    let prod = |inside: bool| {
        thetas_deg
            .iter()
            .enumerate()
            .filter(|(i, _)| fragment.contains(&(i + 2)) == inside)
            .map(|(_, t)| (t.to_radians() / 2.0).cos())
            .product::<f64>()
    };
    let h_f = h2((1.0 + prod(true)) / 2.0);
    let h_sf = h2((1.0 + prod(false)) / 2.0);
    1.0 + h_f - h_sf
}

fn ideal(cfg: &DarwinismConfig) -> DensityMatrix {
    build_darwinism_state(cfg).unwrap().to_density()
}

fn frag(members: &[usize]) -> Fragment {
    Fragment::new(members.to_vec(), 6).unwrap()
}

fn criterion_1() -> Outcome {
    let rho = ideal(&DarwinismConfig::theta_a());
    let start = Instant::now();
    let report = parallel::with_threads(Some(1), || {
        parallel::full_report(&rho, &HolevoOptions::default())
    })
    .unwrap();
    let elapsed = start.elapsed();
    let (proper, full): (Vec<_>, Vec<_>) = report.rows.iter().partition(|r| r.fragment.len() < 5);
    let worst = |f: &dyn Fn(&information::FragmentCorrelation) -> f64| {
        proper.iter().map(|r| f(r)).fold(0.0, f64::max)
    };
    let di = worst(&|r| (r.mutual_info - 1.0).abs());
    let dchi = worst(&|r| (r.holevo - 1.0).abs());
    let dd = worst(&|r| r.discord.abs());
    let f = full[0];
    merge(vec![
        check(proper.len() == 30 && full.len() == 1, format!("{} proper + {} full rows", proper.len(), full.len())),
        check(di < 1e-9, format!("proper max|I−1| = {di:.1e}")),
        check(dchi < 1e-6 && dd < 1e-6, format!("proper max|χ−1| = {dchi:.1e}, max|D| = {dd:.1e}")),
        check(
            (f.mutual_info - 2.0).abs() < 1e-9 && (f.holevo - 1.0).abs() < 1e-6 && (f.discord - 1.0).abs() < 1e-6,
            format!("full I = {:.9}, χ = {:.9}, D = {:.9}", f.mutual_info, f.holevo, f.discord),
        ),
        check(elapsed < Duration::from_secs(60), format!("single-thread runtime {elapsed:.2?}")),
    ])
}

fn criterion_2() -> Outcome {
    let cfg = DarwinismConfig::theta_b();
    let rho = ideal(&cfg);
    let opts = HolevoOptions::default();
    let i5 = mutual_information(&rho, &frag(&[5])).unwrap();
    let i6 = mutual_information(&rho, &frag(&[6])).unwrap();
    let chi5 = information::holevo_bound(&rho, &frag(&[5]), &opts).unwrap().value;
    let curve = information::accumulation_curve(&rho, &[5, 6, 2, 3, 4], &opts).unwrap();
    let (c1, c2) = (curve[0].mutual_info, curve[1].mutual_info);
    // the closed form must itself land on the quoted values, and the library on the closed form
    let oracle = [
        (i5, closed_form_mi(&cfg.thetas_deg, &[5])),
        (i6, closed_form_mi(&cfg.thetas_deg, &[6])),
        (c2, closed_form_mi(&cfg.thetas_deg, &[5, 6])),
    ];
    let oracle_gap = oracle.iter().map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    merge(vec![
        check((i5 - 0.45458).abs() < 1e-4, format!("I({{5}}) = {i5:.6}")),
        check((i6 - 0.67708).abs() < 1e-4, format!("I({{6}}) = {i6:.6}")),
        check((chi5 - 0.45458).abs() < 1e-4, format!("χ({{5}}) = {chi5:.6}")),
        check(
            (c1 - 0.45458).abs() < 1e-4 && (c2 - 0.79507).abs() < 1e-4,
            format!("prefix 56234 starts ({c1:.6}, {c2:.6})"),
        ),
        check(oracle_gap < 1e-9, format!("max |library − two-branch closed form| = {oracle_gap:.1e}")),
    ])
}

fn random_config(rng: &mut StdRng) -> DarwinismConfig {
    let n_env = rng.random_range(1..=5);
    let thetas = (0..n_env).map(|_| rng.random_range(0.0..360.0)).collect();
    let mut cfg = DarwinismConfig::balanced(thetas);
    let w: f64 = rng.random_range(0.05..0.95);
    cfg.alpha = C64::from_polar(w.sqrt(), rng.random_range(0.0..2.0 * PI));
    cfg.beta = C64::from_polar((1.0 - w).sqrt(), rng.random_range(0.0..2.0 * PI));
    cfg
}

fn criterion_3() -> Outcome {
    let mut parts = Vec::new();
    for (name, cfg) in [("θ_A", DarwinismConfig::theta_a()), ("θ_B", DarwinismConfig::theta_b())] {
        let c = information::coherence(&information::system_state(&ideal(&cfg)).unwrap()).unwrap();
        parts.push(check(c.abs() < 1e-9, format!("{name} coherence = {c:.1e}")));
    }
    let mut rng = StdRng::seed_from_u64(3);
    let mut worst_offdiag = 0.0f64;
    let mut worst_coherence = 0.0f64;
    for _ in 0..20 {
        let cfg = random_config(&mut rng);
        let rho_s = information::system_state(&ideal(&cfg)).unwrap();
        let env: Vec<usize> = (2..=cfg.n_qubits()).collect();
        let ab = cfg.alpha * cfg.beta.conj();
        let ov = branch_overlap(&cfg, &env).unwrap();
        worst_offdiag = worst_offdiag.max((rho_s.matrix()[(0, 1)] - ab * ov).norm());
        // C = H_cl − H with ρ_S eigenvalues (1 ± √((|α|²−|β|²)² + 4|αβ*|²ov²))/2
        let (pa, pb) = (cfg.alpha.norm_sqr(), cfg.beta.norm_sqr());
        let r = ((pa - pb).powi(2) + 4.0 * ab.norm_sqr() * ov * ov).sqrt();
        let want = h2(pa) - h2((1.0 + r) / 2.0);
        let got = information::coherence(&rho_s).unwrap();
        worst_coherence = worst_coherence.max((got - want).abs());
    }
    parts.push(check(
        worst_offdiag < 1e-9 && worst_coherence < 1e-9,
        format!("20 random configs: max|ρ_S[0,1] − αβ*·overlap| = {worst_offdiag:.1e}, max|C − closed form| = {worst_coherence:.1e}"),
    ));
    merge(parts)
}

fn criterion_4() -> Outcome {
    let cfg = DarwinismConfig::theta_a()
        .with_noise(NoiseSpec::Depolarizing(NoiseStrength::TargetPurity(0.777)));
    let State::Density(rho) = darwinism::simulate(&cfg).unwrap() else {
        unreachable!()
    };
    let fragments = information::enumerate_fragments(5).unwrap();
    let mis: Vec<f64> = fragments
        .iter()
        .map(|f| mutual_information(&rho, f).unwrap())
        .collect();
    let mean = |k: usize| {
        let v: Vec<f64> = fragments
            .iter()
            .zip(&mis)
            .filter(|(f, _)| f.len() == k)
            .map(|(_, &i)| i)
            .collect();
        v.iter().sum::<f64>() / v.len() as f64
    };
    let rho_s = information::system_state(&rho).unwrap();
    let h_cl = shannon_entropy(&rho_s.populations()).unwrap();
    let singleton = mean(1);
    let gap = mean(4) - mean(1);

    let mut rng = StdRng::seed_from_u64(4);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let big_mask = rng.random_range(2u32..32);
        let small_mask = loop {
            let m = rng.random_range(1u32..32) & big_mask;
            if m != 0 {
                break m;
            }
        };
        let members = |m: u32| (0..5).filter(|b| m >> b & 1 == 1).map(|b| b + 2).collect::<Vec<_>>();
        let small = mutual_information(&rho, &frag(&members(small_mask))).unwrap();
        let big = mutual_information(&rho, &frag(&members(big_mask))).unwrap();
        worst = worst.max(small - big);
    }
    merge(vec![
        check(
            singleton >= 0.7 * h_cl,
            format!(
                "purity {:.6}: mean singleton I = {singleton:.6} vs 0.7·H_cl(ρ_S) = {:.6}",
                purity(&rho),
                0.7 * h_cl
            ),
        ),
        check(
            (gap - PLATEAU_GAP).abs() < 1e-6,
            format!("size-1→4 gap = {gap:.9} (fixture {PLATEAU_GAP:.9})"),
        ),
        check(worst <= 1e-9, format!("1000 nested pairs: max I(F) − I(F') = {worst:.1e}")),
    ])
}

fn criterion_5() -> Outcome {
    let rho = ideal(&DarwinismConfig::theta_a());
    let curve = information::accumulation_curve(&rho, &[2, 3, 4, 5, 6], &HolevoOptions::default()).unwrap();
    let worst = curve[..4].iter().map(|p| p.discord).fold(f64::NEG_INFINITY, f64::max);
    let rise = curve[4].discord - curve[3].discord;
    merge(vec![
        check(worst <= 1e-4, format!("θ_A order 23456: max proper-prefix D = {worst:.1e}")),
        check(rise >= 0.9, format!("D(full) − D(size 4) = {rise:.6}")),
    ])
}

fn random_density(rng: &mut StdRng, n: usize) -> DensityMatrix {
    let d = 1 << n;
    let a = CMatrix::from_fn(d, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let m = a.matmul(&a.adjoint());
    let t = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / t)).unwrap()
}

/// Euclidean projection onto the probability simplex by bisection on the threshold.
fn simplex_projection(values: &[f64]) -> Vec<f64> {
    let mass = |t: f64| values.iter().map(|v| (v - t).max(0.0)).sum::<f64>();
    let mut lo = values.iter().cloned().fold(f64::INFINITY, f64::min) - 1.0;
    let mut hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mass(mid) > 1.0 {
            lo = mid
        } else {
            hi = mid
        }
    }
    let t = 0.5 * (lo + hi);
    values.iter().map(|v| (v - t).max(0.0)).collect()
}

fn criterion_6() -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);
    let mut worst_roundtrip = 0.0f64;
    for _ in 0..20 {
        let rho = random_density(&mut rng, 3);
        let back = tomography::reconstruct(&tomography::exact_dataset(&rho).unwrap()).unwrap();
        worst_roundtrip = worst_roundtrip.max(back.matrix().sub(rho.matrix()).frobenius_norm());
    }

    let ghz = PureState::ghz(6).unwrap();
    let data = tomography::sample_dataset(&ghz.to_density(), 700, 7).unwrap();
    let fid = fidelity_pure(&tomography::reconstruct(&data).unwrap(), &ghz).unwrap();
    let again = fidelity_pure(
        &tomography::reconstruct(&tomography::sample_dataset(&ghz.to_density(), 700, 7).unwrap()).unwrap(),
        &ghz,
    )
    .unwrap();

    let mut worst_mle = 0.0f64;
    for case in 0..200 {
        let d = if case % 2 == 0 { 2 } else { 4 };
        let a = CMatrix::from_fn(d, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let mut h = a.add(&a.adjoint());
        // shift so the unit-trace estimate has negative eigenvalues in most cases
        let t = h.trace().re;
        h = h.add(&CMatrix::identity(d).scale_real((1.0 - t) / d as f64));
        let eig = hermitian_eigen(&h).unwrap();
        let oracle = eig.reassemble(&simplex_projection(&eig.values));
        let got = mle_project(&HermitianEstimate::new(h).unwrap()).unwrap();
        worst_mle = worst_mle.max(got.matrix().max_abs_diff(&oracle));
    }
    merge(vec![
        check(worst_roundtrip <= 1e-9, format!("exact-mode 3-qubit roundtrip max Frobenius error = {worst_roundtrip:.1e}")),
        check(
            fid >= 0.95 && fid.to_bits() == GHZ_700_SEED_7_FIDELITY.to_bits() && fid.to_bits() == again.to_bits(),
            format!("GHZ 700 shots seed 7: fidelity = {fid:?} (fixture {GHZ_700_SEED_7_FIDELITY:?})"),
        ),
        check(worst_mle <= 1e-6, format!("200 random 2×2/4×4 projections: max deviation from simplex oracle = {worst_mle:.1e}")),
    ])
}

fn criterion_7() -> Outcome {
    let ghz = PureState::ghz(6).unwrap();
    let rho = ghz.to_density();
    let data = tomography::sample_dataset(&rho, 700, 11).unwrap();
    let runs: Vec<Vec<DensityMatrix>> = [1, 4, 8]
        .iter()
        .map(|&t| parallel::with_threads(Some(t), || parallel::bootstrap(&data, 100, 5)).unwrap())
        .collect();
    let serial = tomography::bootstrap(&data, 100, 5).unwrap();
    let deterministic = runs.iter().all(|r| *r == serial) && serial.len() == 100;

    let fidelity = Functional::Fidelity(ghz);
    let mut ratios = Vec::new();
    for pair in 0..10u64 {
        let spread = |shots: u64| {
            let d = tomography::sample_dataset(&rho, shots, 100 + pair).unwrap();
            let ens = parallel::bootstrap(&d, 100, 200 + pair).unwrap();
            scalar_errorbar(&ens, &fidelity).unwrap().std_dev
        };
        ratios.push(spread(700) / spread(2800));
    }
    let (lo, hi) = ratios
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &r| (a.min(r), b.max(r)));
    merge(vec![
        check(deterministic, "100 trials identical under 1, 4, 8 threads and serially"),
        check(
            lo >= 1.3 && hi <= 3.0,
            format!("std(700)/std(2800) over 10 seed pairs in [{lo:.3}, {hi:.3}]"),
        ),
    ])
}

fn report_gap(a: &CorrelationReport, b: &CorrelationReport) -> f64 {
    let mut gap = (a.system_entropy - b.system_entropy)
        .abs()
        .max((a.system_classical_entropy - b.system_classical_entropy).abs())
        .max((a.coherence - b.coherence).abs());
    assert_eq!(a.rows.len(), b.rows.len());
    for (x, y) in a.rows.iter().zip(&b.rows) {
        assert_eq!(x.fragment, y.fragment);
        gap = gap
            .max((x.mutual_info - y.mutual_info).abs())
            .max((x.holevo - y.holevo).abs())
            .max((x.discord - y.discord).abs());
    }
    gap
}

fn criterion_8() -> Outcome {
    let mut rng = StdRng::seed_from_u64(8);
    let opts = HolevoOptions::default();
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let cfg = random_config(&mut rng);
        let ry = build_with_coupling(&cfg, Coupling::ControlledRy).unwrap().to_density();
        let ham = build_with_coupling(&cfg, Coupling::Hamiltonian).unwrap().to_density();
        let a = parallel::full_report(&ry, &opts).unwrap();
        let b = parallel::full_report(&ham, &opts).unwrap();
        worst = worst.max(report_gap(&a, &b));
    }
    check(worst <= 1e-9, format!("20 random configs: max scalar difference = {worst:.1e}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 GHZ oracle", criterion_1),
        ("2 θ_B closed forms", criterion_2),
        ("3 decoherence", criterion_3),
        ("4 plateau structure", criterion_4),
        ("5 discord rise", criterion_5),
        ("6 tomography pipeline", criterion_6),
        ("7 bootstrap", criterion_7),
        ("8 gate equivalence", criterion_8),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {name} ({:.1?}): {}", start.elapsed(), outcome.detail);
        failed += usize::from(!outcome.pass);
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
