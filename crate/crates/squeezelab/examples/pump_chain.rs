//! Quantum-pump dynamics on the exactly finite invariant chain
//! {|kn, N−k⟩}: Rabi-like flopping at N = 1 and pump depletion at N = 10,
//! with the conserved charge ⟨n_a + n·n_b⟩ as a running check.
//!
//! Run: cargo run --release -p squeezelab --example pump_chain

use squeezelab::models::{
    self, conserved_charge_trace, QuantumPumpModel, TRACE_DEPLETION, TRACE_PUMP, TRACE_SIGNAL,
};
use squeezelab::propagate::PropagatorConfig;
use squeezelab::Result;

fn main() -> Result<()> {
    let cfg = PropagatorConfig::spectral();

    // N = 1 is a two-level system: ⟨n_a⟩ = 3 sin²(√6 r̃) exactly.
    let omega = 6f64.sqrt();
    let grid = models::linear_grid(0.0, 2.0 * std::f64::consts::PI / omega, 101)?;
    let two_level = models::run_quantum_pump(&QuantumPumpModel::new(3, 1, grid.clone()), &cfg)?;
    let err = grid
        .iter()
        .zip(two_level.result.trace(TRACE_SIGNAL).unwrap())
        .map(|(r, n_a)| (n_a - 3.0 * (omega * r).sin().powi(2)).abs())
        .fold(0.0, f64::max);
    eprintln!("N = 1 closed form |⟨n_a⟩ - 3sin²(√6 r̃)| <= {err:.2e}");

    // N = 10: an 11-state chain with genuine pump depletion.
    let model = QuantumPumpModel {
        snapshot_stride: Some(5),
        ..QuantumPumpModel::new(3, 10, models::linear_grid(0.0, 1.2, 121)?)
    };
    let run = models::run_quantum_pump(&model, &cfg)?;
    let charge = conserved_charge_trace(&run)?;
    let charge_err = charge
        .iter()
        .map(|q| (q - 30.0).abs())
        .fold(0.0, f64::max);
    eprintln!("N = 10 conserved charge |⟨Q⟩ - 30| <= {charge_err:.2e} over all snapshots");

    let signal = run.result.trace(TRACE_SIGNAL).unwrap();
    let pump = run.result.trace(TRACE_PUMP).unwrap();
    let depletion = run.result.trace(TRACE_DEPLETION).unwrap();
    println!("# n = 3 quantum pump, N = 10, chain dimension {}", run.labels.len());
    println!("# r_tilde\tn_a\tn_b\tdepletion");
    for (i, r) in run.result.r_grid.iter().enumerate() {
        println!(
            "{r:.4}\t{:.8e}\t{:.8e}\t{:.8e}",
            signal[i], pump[i], depletion[i]
        );
    }
    Ok(())
}
