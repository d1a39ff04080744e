use approx::assert_abs_diff_eq;
use ionphot::bloch::presets::*;
use ionphot::bloch::*;
use ionphot::lineshape::*;
use ionphot::{Complex64, DensityMatrix};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_hermitian(n: usize, rng: &mut impl Rng) -> DMatrix<Complex64> {
    let a = DMatrix::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    (&a + a.adjoint()) * c(0.5, 0.0)
}

fn test_schemes() -> Vec<LevelScheme> {
    vec![
        two_level(&TwoLevelPreset {
            probe_rabi: 2.0,
            probe_detuning: 1.5,
            ..Default::default()
        }),
        lambda(&LambdaPreset {
            gamma0: 0.3,
            probe_rabi: 1.0,
            control_detuning: 2.0,
            ..Default::default()
        }),
        ba138_4level(&Ba4LevelPreset {
            probe_rabi: 0.5,
            ..Default::default()
        }),
        ba138_8level(&Ba8LevelPreset {
            repump_angle: 1.0,
            laser_linewidth: 0.2,
            probe_detuning: -7.0,
            ..Default::default()
        }),
    ]
}

/// `−i[H, ρ] + Σ (CρC† − ½{C†C, ρ})` minus dephasing, evaluated with dense
/// matrix products straight from the scheme.
fn brute_force(scheme: &LevelScheme, energies: &[f64], rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = scheme.dim();
    let mut h = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(n, energies.iter().map(|&e| c(e, 0.0))));
    for k in &scheme.couplings {
        let w = Complex64::from_polar(k.rabi, k.phase);
        h[(k.upper, k.lower)] += w;
        h[(k.lower, k.upper)] += w.conj();
    }
    let mut out = (&h * rho - rho * &h) * c(0.0, -1.0);
    let jumps = scheme
        .decays
        .iter()
        .map(|d| (d.upper, d.lower, d.rate))
        .chain(scheme.pumping.iter().map(|p| (p.from, p.to, p.rate)));
    for (from, to, rate) in jumps {
        let mut op = DMatrix::<Complex64>::zeros(n, n);
        op[(to, from)] = c(rate.sqrt(), 0.0);
        let cdc = op.adjoint() * &op;
        out += &op * rho * op.adjoint() - (&cdc * rho + rho * &cdc) * c(0.5, 0.0);
    }
    for d in &scheme.dephasings {
        let (a, b) = d.levels;
        out[(a, b)] -= rho[(a, b)] * d.rate;
        out[(b, a)] -= rho[(b, a)] * d.rate;
    }
    out
}

#[test]
fn superoperator_matches_dense_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for scheme in test_schemes() {
        let l = build_liouvillian(&scheme).unwrap();
        let e = l.energies();
        for k in &scheme.couplings {
            let gap = scheme.levels[k.upper].zeeman_shift - scheme.levels[k.lower].zeeman_shift - k.detuning;
            assert!((e[k.upper] - e[k.lower] - gap).abs() < 1e-12);
        }
        for _ in 0..20 {
            let rho = random_hermitian(scheme.dim(), &mut rng);
            let diff = (l.apply(&rho) - brute_force(&scheme, e, &rho)).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(diff <= 1e-12, "assembly mismatch {diff:e}");
        }
    }
}

#[test]
fn lindblad_map_is_trace_free_and_hermitian() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for scheme in test_schemes() {
        let l = build_liouvillian(&scheme).unwrap();
        for _ in 0..100 {
            let rho = random_hermitian(scheme.dim(), &mut rng);
            let d = l.apply(&rho);
            assert!(d.trace().norm() <= 1e-12);
            let herm = (&d - d.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(herm <= 1e-12);
        }
    }
}

#[test]
fn steady_states_satisfy_invariants() {
    for scheme in test_schemes() {
        let l = build_liouvillian(&scheme).unwrap();
        let rho = steady_state(&l).unwrap();
        let residual = l.apply(rho.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(residual <= STEADY_STATE_RESIDUAL_TOL);
        DensityMatrix::new(rho.matrix().clone()).unwrap();
    }
}

#[test]
fn undriven_two_level_relaxes_to_ground() {
    let s = two_level(&TwoLevelPreset {
        probe_rabi: 0.0,
        ..Default::default()
    });
    let rho = steady_state(&build_liouvillian(&s).unwrap()).unwrap();
    assert_abs_diff_eq!(rho.population(0), 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-12);
}

#[test]
fn two_level_coherence_matches_input_output_form() {
    let (gamma, epsilon): (f64, f64) = (5.5, 0.04);
    let gamma_in = epsilon * gamma;
    let e_in = 2e-3;
    let rabi = (2.0 * gamma_in).sqrt() * e_in;
    let saturation = 2.0 * rabi * rabi / (gamma * gamma);
    assert!(saturation <= 1e-4);
    for delta in [-20.0, -5.5, -1.0, 0.0, 0.7, 5.5, 13.0] {
        let s = two_level(&TwoLevelPreset {
            gamma,
            probe_rabi: rabi,
            probe_detuning: delta,
        });
        let rho = steady_state(&build_liouvillian(&s).unwrap()).unwrap();
        let expected = c(0.0, (2.0 * gamma_in).sqrt()) / c(gamma, delta) * e_in;
        let got = rho.get(0, 1);
        assert!((got - expected).norm() / expected.norm() <= 1e-3, "Δ={delta}: {got} vs {expected}");
    }
}

#[test]
fn two_level_spectrum_reduces_to_lineshape() {
    let s = two_level(&TwoLevelPreset::default());
    let grid: Vec<f64> = (-40..=40).map(|k| k as f64 * 0.5).collect();
    let spectrum = probe_spectrum(&s, &ProbeSpec::scalar("probe", 0.04), &grid).unwrap();
    let p = TwoLevelParams::new(5.5, 0.04, 0.0).unwrap();
    for point in &spectrum {
        assert!((point.transmission - transmission(point.detuning, &p)).abs() <= 1e-3);
        assert!((point.phase - phase_shift(point.detuning, &p)).abs() <= 1e-3);
        assert!((0.0..=1.0).contains(&point.transmission));
    }
    let centre = &spectrum[40];
    assert_eq!(centre.detuning, 0.0);
    assert_abs_diff_eq!(1.0 - centre.transmission, 0.1536, epsilon = 1e-6);
}

#[test]
fn lambda_control_only_pumps_into_probe_ground_state() {
    let s = lambda(&LambdaPreset {
        probe_rabi: 0.0,
        control_rabi: 3.0,
        ..Default::default()
    });
    let rho = steady_state(&build_liouvillian(&s).unwrap()).unwrap();
    assert_abs_diff_eq!(rho.population(0), 1.0, epsilon = 1e-10);
}

/// Solver response against the analytic Λ form over `δ ∈ [−3γ, 3γ]`,
/// relative to the peak analytic magnitude.
fn lambda_deviation(gamma: f64, gamma0: f64, omega_r: f64, delta_g: f64) -> f64 {
    let s = lambda(&LambdaPreset {
        gamma,
        gamma0,
        control_rabi: omega_r,
        probe_detuning: delta_g,
        probe_rabi: 1e-3 * gamma,
        ..Default::default()
    });
    let deltas: Vec<f64> = (-60..=60).map(|k| k as f64 * 0.05 * gamma).collect();
    let grid: Vec<f64> = deltas.iter().map(|d| d + delta_g).collect();
    let spec = ProbeSpec::scalar("probe", 0.04).sweeping("control");
    let spectrum = probe_spectrum(&s, &spec, &grid).unwrap();
    let p = LambdaParams::new(gamma, gamma0, omega_r, delta_g).unwrap();
    let analytic: Vec<Complex64> = deltas.iter().map(|&d| eit_susceptibility(d, &p)).collect();
    let scale = analytic.iter().map(|z| z.norm()).fold(0.0, f64::max);
    spectrum
        .iter()
        .zip(&analytic)
        .map(|(pt, a)| match pt.response {
            ProbeResponse::Scalar(l) => (l - a).norm() / scale,
            _ => unreachable!(),
        })
        .fold(0.0, f64::max)
}

#[test]
fn lambda_solver_matches_analytic_response() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for exponent in [-4.0, -2.0, 0.0] {
        let gamma: f64 = rng.random_range(3.0..15.0);
        let omega_r: f64 = rng.random_range(0.3..2.0) * gamma;
        let gamma0 = 10f64.powf(exponent) * omega_r * omega_r / gamma;
        let delta_g = rng.random_range(-1.0..1.0) * gamma;
        let dev = lambda_deviation(gamma, gamma0, omega_r, delta_g);
        assert!(dev <= 1e-3, "γγ₀/Ω² = 1e{exponent}: deviation {dev:e}");
    }
}

#[test]
fn lambda_is_transparent_on_two_photon_resonance() {
    for (gamma, omega_r, delta_g) in [(10.0, 5.0, 0.0), (6.0, 2.0, 3.0), (8.0, 12.0, -4.0)] {
        let s = lambda(&LambdaPreset {
            gamma,
            gamma0: 0.0,
            control_rabi: omega_r,
            probe_detuning: delta_g,
            ..Default::default()
        });
        let spec = ProbeSpec::scalar("probe", 0.04).sweeping("control");
        let t = probe_spectrum(&s, &spec, &[delta_g]).unwrap()[0].transmission;
        assert!((t - 1.0).abs() <= 1e-9, "T = {t}");
        let p = LambdaParams::new(gamma, 0.0, omega_r, delta_g).unwrap();
        assert!((eit_transmission(0.0, 0.04, &p) - 1.0).abs() <= 1e-9);
    }
}

#[test]
fn four_level_reproduces_zeeman_doublet() {
    let s = ba138_4level(&Ba4LevelPreset::default());
    let grid: Vec<f64> = (-30..=30).map(f64::from).collect();
    let spectrum = probe_spectrum(&s, &ProbeSpec::polarimetric("probe", 0.008), &grid).unwrap();
    let p = ZeemanDoubletParams::new(TwoLevelParams::new(5.5, 0.008, 0.0).unwrap(), 9.0, 0.9, 0.1).unwrap();
    for point in &spectrum {
        assert!((point.transmission - polarimetry(point.detuning, &p).i0).abs() <= 1e-5);
        let theta = faraday_angle(point.detuning, &p).exact;
        assert!((point.phase - theta).abs() <= 1e-3 * 0.004);
    }
}

/// Classical rate equations: each coupling transfers population at
/// `2Ω²γ/(γ² + Δ²)` with the detuning and coherence width taken from the
/// raw scheme, decays and pumping at their rates.
fn rate_equation_populations(s: &LevelScheme) -> Vec<f64> {
    let n = s.dim();
    let mut out_rate = vec![0.0; n];
    let mut a = DMatrix::<f64>::zeros(n, n);
    for d in &s.decays {
        a[(d.lower, d.upper)] += d.rate;
        a[(d.upper, d.upper)] -= d.rate;
        out_rate[d.upper] += d.rate;
    }
    for p in &s.pumping {
        a[(p.to, p.from)] += p.rate;
        a[(p.from, p.from)] -= p.rate;
        out_rate[p.from] += p.rate;
    }
    for k in &s.couplings {
        let width = 0.5 * (out_rate[k.lower] + out_rate[k.upper])
            + s.dephasings
                .iter()
                .filter(|d| d.levels == (k.lower, k.upper) || d.levels == (k.upper, k.lower))
                .map(|d| d.rate)
                .sum::<f64>();
        let detuning = k.detuning - (s.levels[k.upper].zeeman_shift - s.levels[k.lower].zeeman_shift);
        let r = 2.0 * k.rabi * k.rabi * width / (width * width + detuning * detuning);
        for (from, to) in [(k.lower, k.upper), (k.upper, k.lower)] {
            a[(to, from)] += r;
            a[(from, from)] -= r;
        }
    }
    for j in 0..n {
        a[(0, j)] = 1.0;
    }
    let mut b = nalgebra::DVector::zeros(n);
    b[0] = 1.0;
    a.lu().solve(&b).unwrap().iter().copied().collect()
}

#[test]
fn eight_level_far_detuned_repumper_matches_rate_equations() {
    for (probe_detuning, angle) in [(-10.0, 1.0), (0.0, 0.6), (8.0, 1.2)] {
        let s = ba138_8level(&Ba8LevelPreset {
            probe_detuning,
            repump_detuning: 150.0,
            repump_rabi: 5.0,
            repump_angle: angle,
            b_field_gauss: 10.0,
            ..Default::default()
        });
        let rho = steady_state(&build_liouvillian(&s).unwrap()).unwrap();
        let oracle = rate_equation_populations(&s);
        let (bloch_s, oracle_s) = (rho.population(0) + rho.population(1), oracle[0] + oracle[1]);
        for i in 0..2 {
            let (b, o) = (rho.population(i) / bloch_s, oracle[i] / oracle_s);
            assert!((b - o).abs() <= 1e-2, "Δp={probe_detuning}: S[{i}] {b} vs {o}");
        }
        assert!((bloch_s - oracle_s).abs() <= 1e-2, "S manifold {bloch_s} vs {oracle_s}");
    }
}

#[test]
fn eight_level_dark_resonance_flips_phase() {
    let repump = 10.0;
    let s = ba138_8level(&Ba8LevelPreset {
        repump_detuning: repump,
        b_field_gauss: 0.5,
        ..Default::default()
    });
    let deltas: Vec<f64> = (-24..=24).map(|k| k as f64 * 0.25).collect();
    let grid: Vec<f64> = deltas.iter().map(|d| d + repump).collect();
    let spectrum = probe_spectrum(&s, &ProbeSpec::scalar("probe", 0.008), &grid).unwrap();
    let background = |d: f64| spectrum.iter().find(|p| (p.detuning - repump - d).abs() < 1e-9).unwrap().phase;
    let outside = background(-6.0).signum();
    assert_eq!(outside, background(6.0).signum());
    let flipped = spectrum
        .iter()
        .filter(|p| (p.detuning - repump).abs() <= 2.0)
        .any(|p| p.phase.signum() != outside);
    assert!(flipped, "no phase sign flip within ±2 MHz of the two-photon resonance");
    let peak = spectrum.iter().map(|p| p.transmission).fold(0.0, f64::max);
    assert!(peak > background_transmission(&spectrum));
}

fn background_transmission(spectrum: &[SpectrumPoint]) -> f64 {
    spectrum.first().unwrap().transmission.max(spectrum.last().unwrap().transmission)
}

#[test]
fn permuting_levels_permutes_the_steady_state() {
    let s = ba138_8level(&Ba8LevelPreset {
        repump_angle: 0.8,
        probe_detuning: -5.0,
        ..Default::default()
    });
    let rho = steady_state(&build_liouvillian(&s).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..5 {
        let mut perm: Vec<usize> = (0..8).collect();
        for i in (1..8).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        let permuted = steady_state(&build_liouvillian(&s.permuted(&perm)).unwrap()).unwrap();
        let expected = rho.permuted(&perm);
        let diff = (permuted.matrix() - expected.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(diff <= 1e-10, "perm {perm:?}: {diff:e}");
    }
}

#[test]
fn disconnected_levels_are_degenerate() {
    let s = LevelScheme {
        levels: vec![
            Level {
                label: "a".into(),
                zeeman_shift: 0.0,
            },
            Level {
                label: "b".into(),
                zeeman_shift: 0.0,
            },
        ],
        ..Default::default()
    };
    assert_eq!(steady_state(&build_liouvillian(&s).unwrap()).unwrap_err(), BlochError::DegenerateSteadyState(4));
}

#[test]
fn strong_probe_is_refused() {
    let s = two_level(&TwoLevelPreset {
        probe_rabi: 1.0,
        ..Default::default()
    });
    let err = probe_spectrum(&s, &ProbeSpec::scalar("probe", 0.04), &[0.0]).unwrap_err();
    assert!(matches!(err, BlochError::ProbeNotWeak { coupling: 0, .. }));
    let err = probe_spectrum(&s, &ProbeSpec::scalar("nope", 0.04), &[0.0]).unwrap_err();
    assert_eq!(err, BlochError::UnknownLaser("nope".into()));
}

#[test]
fn scheme_file_round_trips_through_solver() {
    let s = lambda(&LambdaPreset {
        gamma0: 0.2,
        ..Default::default()
    });
    let text = s.to_toml_string();
    let dir = std::env::temp_dir().join(format!("ionphot-scheme-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("lambda.toml");
    std::fs::write(&path, &text).unwrap();
    let loaded = LevelScheme::from_file(&path).unwrap();
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(loaded, s);
    let a = steady_state(&build_liouvillian(&s).unwrap()).unwrap();
    let b = steady_state(&build_liouvillian(&loaded).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn fit_recovers_strengths_from_synthetic_spectrum() {
    let truth = Ba8LevelPreset {
        probe_rabi: 0.4,
        repump_rabi: 4.0,
        repump_detuning: 10.0,
        ..Default::default()
    };
    let grid: Vec<f64> = (-20..=40).map(|k| k as f64 * 0.5).collect();
    let data: Vec<(f64, f64)> = probe_spectrum(&ba138_8level(&truth), &ProbeSpec::scalar("probe", 0.008), &grid)
        .unwrap()
        .iter()
        .map(|p| (p.detuning, p.transmission))
        .collect();
    let start = Ba8LevelPreset {
        probe_rabi: 0.25,
        repump_rabi: 6.0,
        ..truth
    };
    let opts = fit::NelderMeadOptions {
        max_iterations: 200,
        sd_tolerance: 1e-14,
        initial_step: 0.2,
    };
    let result = fit::fit_ba138_8level(&data, &start, 0.008, &opts).unwrap();
    assert!((result.params.repump_rabi / truth.repump_rabi - 1.0).abs() < 0.02, "{result:?}");
    assert!(result.rss < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn two_level_weak_limit_property(gamma in 1.0f64..20.0, delta in -40.0f64..40.0, eps in 0.0f64..0.5) {
        let s = two_level(&TwoLevelPreset { gamma, probe_rabi: 1e-3 * gamma, probe_detuning: delta });
        let t = probe_spectrum(&s, &ProbeSpec::scalar("probe", eps), &[delta]).unwrap()[0].transmission;
        let p = TwoLevelParams::new(gamma, eps, 0.0).unwrap();
        prop_assert!((t - transmission(delta, &p)).abs() <= 1e-3);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&t));
    }

    #[test]
    fn lambda_steady_state_is_a_density_matrix(
        gamma0 in 0.0f64..2.0,
        omega in 0.1f64..20.0,
        dp in -20.0f64..20.0,
        dc in -20.0f64..20.0,
        probe in 0.0f64..5.0,
    ) {
        let s = lambda(&LambdaPreset {
            gamma0,
            control_rabi: omega,
            probe_rabi: probe,
            probe_detuning: dp,
            control_detuning: dc,
            ..Default::default()
        });
        let l = build_liouvillian(&s).unwrap();
        let rho = steady_state(&l).unwrap();
        prop_assert!(DensityMatrix::new(rho.matrix().clone()).is_ok());
        prop_assert!(rho.eigenvalues()[0] >= -1e-8);
    }
}
