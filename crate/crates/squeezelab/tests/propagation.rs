//! Propagator invariants: cross-method agreement, unitarity, reversibility,
//! realness, and leakage accounting.

mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use squeezelab::fock::{
    build_classical_generator, build_sector_basis, number_observable, Generator, StateVector,
};
use squeezelab::models::{self, QuantumPumpModel, TRACE_SIGNAL};
use squeezelab::propagate::{
    evolve, leakage, Method, Observable, PropagatorConfig, TraceRequest,
};

fn reference_cfg() -> PropagatorConfig {
    PropagatorConfig {
        method: Method::Reference,
        ..PropagatorConfig::default()
    }
}

fn classical_setup(n: u32, m: usize) -> (Generator, StateVector, Vec<f64>) {
    let basis = build_sector_basis(n, 0, m).unwrap();
    let gen = build_classical_generator(&basis).unwrap();
    let psi0 = StateVector::vacuum(m).unwrap();
    let weights = number_observable(&basis);
    (gen, psi0, weights)
}

fn signal_request(weights: Vec<f64>) -> TraceRequest {
    TraceRequest::observables(vec![Observable::new(TRACE_SIGNAL, weights)])
}

fn trace_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// State at squeezing parameter `r`; the grid is anchored at 0, so negative
/// `r` walks the inverse branch.
fn final_state(
    gen: &Generator,
    psi0: &StateVector,
    r: f64,
    cfg: &PropagatorConfig,
) -> StateVector {
    if r == 0.0 {
        return psi0.clone();
    }
    let grid = if r > 0.0 { [0.0, r] } else { [r, 0.0] };
    let request = TraceRequest::default().with_snapshots(1);
    let result = evolve(gen, psi0, &grid, &request, cfg).unwrap();
    let snap = result
        .snapshots
        .iter()
        .find(|s| s.r == r)
        .expect("snapshot at the requested parameter");
    snap.state.clone()
}

fn fidelity(a: &StateVector, b: &StateVector) -> f64 {
    let overlap: Complex64 = a
        .amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| x.conj() * y)
        .sum();
    overlap.norm_sqr()
}

#[test]
fn three_methods_agree_pairwise_small_dim() {
    let (gen, psi0, weights) = classical_setup(2, 64);
    let grid = models::linear_grid(0.0, 0.3, 61).unwrap();
    let request = signal_request(weights);

    let spectral = evolve(&gen, &psi0, &grid, &request, &PropagatorConfig::spectral()).unwrap();
    let krylov = evolve(&gen, &psi0, &grid, &request, &PropagatorConfig::krylov()).unwrap();
    let reference = evolve(&gen, &psi0, &grid, &request, &reference_cfg()).unwrap();

    let s = spectral.trace(TRACE_SIGNAL).unwrap();
    let k = krylov.trace(TRACE_SIGNAL).unwrap();
    let r = reference.trace(TRACE_SIGNAL).unwrap();
    assert!(trace_diff(s, k) < 1e-8, "spectral vs krylov: {:.3e}", trace_diff(s, k));
    assert!(trace_diff(s, r) < 1e-8, "spectral vs reference: {:.3e}", trace_diff(s, r));
    assert!(trace_diff(k, r) < 1e-8, "krylov vs reference: {:.3e}", trace_diff(k, r));
}

#[test]
fn three_methods_agree_pairwise_mid_dim() {
    // m = 256 keeps ‖H‖ large, so the reference integrator only gets a
    // short arc; agreement there still exercises all three code paths.
    let (gen, psi0, weights) = classical_setup(3, 256);
    let grid = models::linear_grid(0.0, 0.01, 21).unwrap();
    let request = signal_request(weights);

    let spectral = evolve(&gen, &psi0, &grid, &request, &PropagatorConfig::spectral()).unwrap();
    let krylov = evolve(&gen, &psi0, &grid, &request, &PropagatorConfig::krylov()).unwrap();
    let reference = evolve(&gen, &psi0, &grid, &request, &reference_cfg()).unwrap();

    let s = spectral.trace(TRACE_SIGNAL).unwrap();
    let k = krylov.trace(TRACE_SIGNAL).unwrap();
    let r = reference.trace(TRACE_SIGNAL).unwrap();
    assert!(trace_diff(s, k) < 1e-8);
    assert!(trace_diff(s, r) < 1e-8);
    assert!(trace_diff(k, r) < 1e-8);
}

#[test]
fn krylov_matches_spectral_at_dim_512() {
    let (gen, psi0, weights) = classical_setup(3, 512);
    let grid = models::linear_grid(0.0, 0.05, 26).unwrap();
    let request = signal_request(weights);

    let spectral = evolve(&gen, &psi0, &grid, &request, &PropagatorConfig::spectral()).unwrap();
    let krylov = evolve(&gen, &psi0, &grid, &request, &PropagatorConfig::krylov()).unwrap();
    let diff = trace_diff(
        spectral.trace(TRACE_SIGNAL).unwrap(),
        krylov.trace(TRACE_SIGNAL).unwrap(),
    );
    assert!(diff < 1e-9, "trace difference {diff:.3e}");
}

#[test]
fn reference_reproduces_displacement_photon_number() {
    let (gen, psi0, weights) = classical_setup(1, 64);
    let grid = [0.0, 0.5];
    let request = signal_request(weights);
    let result = evolve(&gen, &psi0, &grid, &request, &reference_cfg()).unwrap();
    let n_a = result.trace(TRACE_SIGNAL).unwrap()[1];
    assert!((n_a - 0.25).abs() < 1e-9, "⟨n⟩ = {n_a}, want 0.25");
}

#[test]
fn reference_matches_spectral_on_pump_chain() {
    let model = QuantumPumpModel::new(3, 2, models::linear_grid(0.0, 0.3, 31).unwrap());
    let spectral = models::run_quantum_pump(&model, &PropagatorConfig::spectral()).unwrap();
    let reference = models::run_quantum_pump(&model, &reference_cfg()).unwrap();
    let diff = trace_diff(
        spectral.result.trace(TRACE_SIGNAL).unwrap(),
        reference.result.trace(TRACE_SIGNAL).unwrap(),
    );
    assert!(diff < 1e-9, "trace difference {diff:.3e}");
}

#[test]
fn reference_reverse_run_returns_initial_state() {
    let (gen, psi0, _) = classical_setup(2, 48);
    let cfg = reference_cfg();
    let forward = final_state(&gen, &psi0, 0.8, &cfg);
    let back = final_state(&gen, &forward, -0.8, &cfg);
    let dist: f64 = back
        .amplitudes()
        .iter()
        .zip(psi0.amplitudes())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    assert!(dist < 1e-9, "return distance {dist:.3e}");
}

#[test]
fn spectral_and_krylov_are_reversible() {
    let (gen, psi0, _) = classical_setup(3, 200);
    for cfg in [PropagatorConfig::spectral(), PropagatorConfig::krylov()] {
        let forward = final_state(&gen, &psi0, 2.0, &cfg);
        let back = final_state(&gen, &forward, -2.0, &cfg);
        let f = fidelity(&back, &psi0);
        assert!(
            f >= 1.0 - 1e-9,
            "{} reversibility fidelity {f}",
            cfg.method.name()
        );
    }
}

#[test]
fn zero_diagonal_evolution_from_real_state_stays_real() {
    // H = iA with real antisymmetric A, so e^{rA} is a real orthogonal map.
    let (gen, psi0, _) = classical_setup(2, 80);
    assert!(gen.is_zero_diagonal());
    let grid = models::linear_grid(0.0, 1.0, 11).unwrap();
    let request = TraceRequest::default().with_snapshots(1);
    for cfg in [PropagatorConfig::spectral(), PropagatorConfig::krylov()] {
        let result = evolve(&gen, &psi0, &grid, &request, &cfg).unwrap();
        for snap in &result.snapshots {
            let max_im = snap
                .state
                .amplitudes()
                .iter()
                .map(|a| a.im.abs())
                .fold(0.0, f64::max);
            assert!(
                max_im <= 1e-10,
                "{} grew imaginary parts up to {max_im:.3e}",
                cfg.method.name()
            );
        }
    }
}

#[test]
fn norm_drift_stays_within_tolerance_budget() {
    let (gen, psi0, weights) = classical_setup(3, 128);
    let grid = models::linear_grid(0.0, 3.0, 61).unwrap();
    let request = signal_request(weights);
    for cfg in [PropagatorConfig::spectral(), PropagatorConfig::krylov()] {
        let result = evolve(&gen, &psi0, &grid, &request, &cfg).unwrap();
        let budget = 10.0 * cfg.tolerance;
        assert!(
            result.norm_drift <= budget,
            "{}: norm drift {:.3e} over budget {budget:.1e}",
            cfg.method.name(),
            result.norm_drift
        );
    }
}

#[test]
fn krylov_full_span_keeps_norm_at_dim_256() {
    let (gen, psi0, weights) = classical_setup(3, 256);
    let grid = models::linear_grid(0.0, 3.0, 31).unwrap();
    let request = signal_request(weights);
    let result = evolve(&gen, &psi0, &grid, &request, &PropagatorConfig::krylov()).unwrap();
    assert!(
        result.norm_drift <= 1e-9,
        "norm drift {:.3e}",
        result.norm_drift
    );
}

// ‖H‖ ≈ 2·10.4·256^1.5 ≈ 8.5e4 already forces ~3.4e3 substeps at m = 256;
// at m = 4096 the count grows 64-fold and each substep is 16× wider, far
// past a default test budget. Run explicitly with --ignored to check the
// large-truncation contract end to end.
#[test]
#[ignore = "runs for over an hour; large-truncation variant of the m=256 test"]
fn krylov_full_span_keeps_norm_at_dim_4096() {
    let (gen, psi0, weights) = classical_setup(3, 4096);
    let grid = models::linear_grid(0.0, 3.0, 31).unwrap();
    let request = signal_request(weights);
    let result = evolve(&gen, &psi0, &grid, &request, &PropagatorConfig::krylov()).unwrap();
    assert!(
        result.norm_drift <= 1e-9,
        "norm drift {:.3e}",
        result.norm_drift
    );
}

#[test]
fn leakage_examples() {
    // Vacuum puts nothing in the tail.
    let vacuum = StateVector::vacuum(12).unwrap();
    assert_eq!(leakage(&vacuum, 3).unwrap(), 0.0);

    // A uniform state over dim 10 leaves exactly 2/10 in a 2-entry tail.
    let amp = Complex64::new(0.1f64.sqrt(), 0.0);
    let uniform = StateVector::new(vec![amp; 10]).unwrap();
    assert!((leakage(&uniform, 2).unwrap() - 0.2).abs() < 1e-15);

    // Gentle squeezing in a roomy truncation never reaches the tail.
    let (gen, psi0, weights) = classical_setup(2, 40);
    let grid = [0.0, 0.25];
    let mut request = signal_request(weights);
    request.leakage_tail = Some(2);
    let result = evolve(&gen, &psi0, &grid, &request, &PropagatorConfig::spectral()).unwrap();
    assert!(result.max_leakage() < 1e-10);
}

fn tiny_generator(band: Vec<f64>, diag: Vec<f64>) -> Generator {
    Generator::new(band, diag).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_generators_agree_and_stay_unitary(
        band in prop::collection::vec(0.0f64..5.0, 1..9),
        diag_seed in prop::collection::vec(-5.0f64..5.0, 10),
        r in -1.5f64..1.5,
    ) {
        let dim = band.len() + 1;
        let gen = tiny_generator(band, diag_seed[..dim].to_vec());
        let psi0 = StateVector::basis_state(dim, 0).unwrap();

        let spectral = final_state(&gen, &psi0, r, &PropagatorConfig::spectral());
        let krylov = final_state(&gen, &psi0, r, &PropagatorConfig::krylov());

        let dist: f64 = spectral
            .amplitudes()
            .iter()
            .zip(krylov.amplitudes())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        prop_assert!(dist < 1e-8, "method disagreement {dist:.3e}");

        prop_assert!((spectral.norm() - 1.0).abs() < 1e-10);
        prop_assert!((krylov.norm() - 1.0).abs() < 1e-10);

        let back = final_state(&gen, &krylov, -r, &PropagatorConfig::krylov());
        prop_assert!(fidelity(&back, &psi0) >= 1.0 - 1e-9);
    }
}
