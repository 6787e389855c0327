//! Pump-number parity dependence: with a quantized pump the signal
//! dynamics at fixed effective r = r̃·√N depends drastically on whether
//! the initial pump photon number N is even or odd.
//!
//! Run: cargo run --release -p squeezelab --example pump_parity

use squeezelab::analysis::{parity_scan, ParityFamily};
use squeezelab::models::{self, pump_grid_for_effective, QuantumPumpModel, TRACE_SIGNAL};
use squeezelab::propagate::PropagatorConfig;
use squeezelab::Result;

fn main() -> Result<()> {
    let effective = models::linear_grid(0.0, 3.0, 201)?;
    let cfg = PropagatorConfig::spectral();

    let report = parity_scan(ParityFamily::Pump { n: 3 }, &[30, 31, 32, 33], &effective, &cfg)?;
    eprintln!(
        "N in 30..=33: delta_same {:.3e}, delta_adjacent {:.3e}, ratio {:.1} ({})",
        report.delta_same_parity,
        report.delta_adjacent,
        report.ratio,
        if report.is_drastic() { "drastic" } else { "not drastic" },
    );

    // Per-N traces on the shared effective axis.
    let mut traces = Vec::new();
    for pump_photons in [30u64, 31, 32, 33] {
        let model = QuantumPumpModel {
            snapshot_stride: None,
            ..QuantumPumpModel::new(
                3,
                pump_photons,
                pump_grid_for_effective(&effective, pump_photons),
            )
        };
        let run = models::run_quantum_pump(&model, &cfg)?;
        traces.push(run.result.trace(TRACE_SIGNAL).unwrap().to_vec());
    }
    println!("# n = 3 quantum pump on the effective axis r = r̃·√N");
    println!("# r\tn_a(N=30)\tn_a(N=31)\tn_a(N=32)\tn_a(N=33)");
    for (i, r) in effective.iter().enumerate() {
        println!(
            "{r:.3}\t{:.8e}\t{:.8e}\t{:.8e}\t{:.8e}",
            traces[0][i], traces[1][i], traces[2][i], traces[3][i]
        );
    }
    Ok(())
}
