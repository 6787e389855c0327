//! Model-level checks against dense two-mode evolutions and closed forms.

mod common;

use common::{
    coherent_amplitude, diag_expectation, product_basis_state, signal_number_weights,
    two_mode_dense, two_mode_index, CVector, DenseEvolver,
};
use squeezelab::analysis::normalized_deviation;
use squeezelab::models::{
    self, effective_r, poisson_window, pump_grid_for_effective, ClassicalPumpModel,
    CoherentPumpEnsemble, QuantumPumpModel, SizeSpec, TRACE_SIGNAL, TRACE_SIGNAL_EVEN,
    TRACE_SIGNAL_ODD,
};
use squeezelab::propagate::PropagatorConfig;

/// Dense signal-photon trace from `|0, N⟩`-style product states.
fn dense_signal_trace(
    n: u32,
    signal_dim: usize,
    pump_dim: usize,
    psi0: &CVector,
    grid: &[f64],
) -> Vec<f64> {
    let h = two_mode_dense(n, signal_dim, pump_dim);
    let evolver = DenseEvolver::new(&h);
    let weights = signal_number_weights(signal_dim, pump_dim);
    grid.iter()
        .map(|&r| diag_expectation(&evolver.evolve(psi0, r), &weights))
        .collect()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn pump_chain_matches_dense_two_mode_evolution() {
    // The dense space is padded beyond the chain, so agreement shows the
    // chain really is invariant, not merely a submatrix.
    for &pump_photons in &[2u64, 5] {
        let n = 3u32;
        let grid = models::linear_grid(0.0, 0.8, 17).unwrap();
        let model = QuantumPumpModel::new(n, pump_photons, grid.clone());
        let run = models::run_quantum_pump(&model, &PropagatorConfig::spectral()).unwrap();
        let chain = run.result.trace(TRACE_SIGNAL).unwrap();

        let signal_dim = (u64::from(n) * pump_photons) as usize + 4;
        let pump_dim = pump_photons as usize + 3;
        let psi0 = product_basis_state(0, pump_photons as usize, signal_dim, pump_dim);
        let dense = dense_signal_trace(n, signal_dim, pump_dim, &psi0, &grid);

        let diff = max_abs_diff(chain, &dense);
        assert!(
            diff < 1e-10,
            "N={pump_photons}: chain vs dense trace differs by {diff:.3e}"
        );
    }
}

#[test]
fn dense_two_mode_trace_is_stable_under_enlargement() {
    let n = 3u32;
    let pump_photons = 5usize;
    let grid = models::linear_grid(0.0, 0.8, 9).unwrap();

    let small = {
        let (s, p) = (3 * pump_photons + 2, pump_photons + 2);
        let psi0 = product_basis_state(0, pump_photons, s, p);
        dense_signal_trace(n, s, p, &psi0, &grid)
    };
    let large = {
        let (s, p) = (3 * pump_photons + 11, pump_photons + 4);
        let psi0 = product_basis_state(0, pump_photons, s, p);
        dense_signal_trace(n, s, p, &psi0, &grid)
    };

    let diff = max_abs_diff(&small, &large);
    assert!(diff < 1e-12, "enlargement moved the trace by {diff:.3e}");
}

#[test]
fn ensemble_matches_direct_coherent_pump_evolution() {
    let n = 3u32;
    let mean = 1.5f64;
    let grid = models::linear_grid(0.0, 0.6, 13).unwrap();

    let mut ensemble = CoherentPumpEnsemble::new(n, mean, grid.clone());
    ensemble.tail_epsilon = 1e-12;
    let run = models::run_coherent_ensemble(&ensemble, &PropagatorConfig::spectral()).unwrap();
    assert!(run.retained_mass > 1.0 - 1e-11);

    // Direct evolution of the truncated coherent pump state in one dense
    // two-mode space large enough to hold every retained charge sector.
    let n_max = run.members.last().unwrap().0 as usize;
    let signal_dim = 3 * n_max + 4;
    let pump_dim = n_max + 2;
    let mut psi0 = CVector::zeros(signal_dim * pump_dim);
    for &(pump_photons, _) in &run.members {
        psi0[two_mode_index(0, pump_photons as usize, pump_dim)] =
            nalgebra::Complex::new(coherent_amplitude(mean, pump_photons), 0.0);
    }
    let direct = dense_signal_trace(n, signal_dim, pump_dim, &psi0, &grid);

    let diff = max_abs_diff(run.result.trace(TRACE_SIGNAL).unwrap(), &direct);
    assert!(diff < 1e-8, "ensemble vs direct differs by {diff:.3e}");
}

#[test]
fn ensemble_partial_traces_account_for_parity() {
    let grid = models::linear_grid(0.0, 0.4, 9).unwrap();
    let ensemble = CoherentPumpEnsemble::new(2, 4.0, grid);
    let run = models::run_coherent_ensemble(&ensemble, &PropagatorConfig::spectral()).unwrap();

    // Weights split the retained mass by pump parity.
    let even: f64 = run
        .members
        .iter()
        .filter(|(pump, _)| pump % 2 == 0)
        .map(|(_, w)| w)
        .sum();
    assert!((run.even_weight - even).abs() < 1e-15);
    assert!((run.even_weight + run.odd_weight - run.retained_mass).abs() < 1e-12);

    // Partial traces sum to the full signal trace pointwise.
    let total = run.result.trace(TRACE_SIGNAL).unwrap();
    let even_trace = run.result.trace(TRACE_SIGNAL_EVEN).unwrap();
    let odd_trace = run.result.trace(TRACE_SIGNAL_ODD).unwrap();
    for i in 0..total.len() {
        assert!((even_trace[i] + odd_trace[i] - total[i]).abs() < 1e-12);
    }
}

#[test]
fn poisson_window_reproduces_the_distribution() {
    let mean = 1.5f64;
    let window = poisson_window(mean, 1e-8, 4096).unwrap();

    let mass: f64 = window.iter().map(|(_, w)| w).sum();
    assert!(mass >= 1.0 - 1e-8);
    assert!(mass <= 1.0);

    // Ascending in N and exact Poisson weights.
    for pair in window.windows(2) {
        assert!(pair[0].0 < pair[1].0);
    }
    for &(pump_photons, weight) in &window {
        let amp = coherent_amplitude(mean, pump_photons);
        assert!(
            (weight - amp * amp).abs() < 1e-14,
            "weight mismatch at N={pump_photons}"
        );
    }

    // The window contains the distribution mode.
    let lo = window.first().unwrap().0;
    let hi = window.last().unwrap().0;
    assert!(lo <= 1 && hi >= 1);
}

#[test]
fn quantum_pump_approaches_classical_limit() {
    // At fixed effective r = r̃·√N the pump trace must converge to the
    // classical-pump trace as N grows.
    let n = 2u32;
    let effective = models::linear_grid(0.0, 0.5, 21).unwrap();

    let classical_model = ClassicalPumpModel::new(n, SizeSpec::Sector(64));
    let classical =
        models::run_classical(&classical_model, &effective, &PropagatorConfig::spectral())
            .unwrap();
    let classical_trace = classical.result.trace(TRACE_SIGNAL).unwrap();

    let mut deviations = Vec::new();
    for &pump_photons in &[8u64, 32, 128] {
        let r_tilde = pump_grid_for_effective(&effective, pump_photons);
        assert!((effective_r(r_tilde[20], pump_photons) - 0.5).abs() < 1e-12);
        let model = QuantumPumpModel::new(n, pump_photons, r_tilde);
        let run = models::run_quantum_pump(&model, &PropagatorConfig::spectral()).unwrap();
        let dev =
            normalized_deviation(run.result.trace(TRACE_SIGNAL).unwrap(), classical_trace);
        deviations.push(dev);
    }

    eprintln!("pump-to-classical deviations: {deviations:?}");
    assert!(
        deviations[1] < 0.6 * deviations[0] && deviations[2] < 0.6 * deviations[1],
        "no convergence trend: {deviations:?}"
    );
    assert!(deviations[2] < 5e-3, "N=128 still far: {:.3e}", deviations[2]);
}
