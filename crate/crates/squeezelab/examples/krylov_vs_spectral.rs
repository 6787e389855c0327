//! Spectral vs Krylov propagation: agreement to solver tolerance, and the
//! cost structure of one dense eigendecomposition (O(m³) time, O(m²)
//! memory) against adaptive Lanczos substepping (O(m) memory, time
//! growing with ‖H‖·span).
//!
//! Run: cargo run --release -p squeezelab --example krylov_vs_spectral

use std::time::Instant;

use squeezelab::models::{self, ClassicalPumpModel, SizeSpec, TRACE_SIGNAL};
use squeezelab::propagate::{Method, PropagatorConfig};
use squeezelab::Result;

fn main() -> Result<()> {
    let grid = models::linear_grid(0.0, 0.05, 11)?;

    println!("# n = 3 classical, r in [0, 0.05], vacuum start");
    println!("# m\tspectral_ms\tkrylov_ms\tmax_trace_diff\tworst_norm_drift");
    for m in [128usize, 256, 512, 1024, 2048] {
        let model = ClassicalPumpModel {
            snapshot_stride: None,
            ..ClassicalPumpModel::new(3, SizeSpec::Sector(m))
        };
        let mut traces = Vec::new();
        let mut times = Vec::new();
        let mut drift = 0.0f64;
        for method in [Method::Spectral, Method::Krylov] {
            let cfg = PropagatorConfig {
                method,
                ..PropagatorConfig::default()
            };
            let start = Instant::now();
            let run = models::run_classical(&model, &grid, &cfg)?;
            times.push(start.elapsed().as_secs_f64() * 1e3);
            drift = drift.max(run.result.norm_drift);
            traces.push(run.result.trace(TRACE_SIGNAL).unwrap().to_vec());
        }
        let diff = traces[0]
            .iter()
            .zip(&traces[1])
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        println!(
            "{m}\t{:.1}\t{:.1}\t{diff:.3e}\t{drift:.3e}",
            times[0], times[1]
        );
    }
    eprintln!("spectral decomposes once per run and wins while O(m³) is affordable;");
    eprintln!("krylov keeps only a few vectors, so it reaches truncations where the");
    eprintln!("dense decomposition no longer fits — at matching accuracy");
    Ok(())
}
