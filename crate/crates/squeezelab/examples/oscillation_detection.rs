//! Oscillation certificates: the n = 3 photon number at finite truncation
//! rises and collapses repeatedly instead of growing without bound. The
//! detector extracts extrema with hysteresis and reports the relative
//! drop after the first peak.
//!
//! Run: cargo run --release -p squeezelab --example oscillation_detection

use squeezelab::analysis::{detect_oscillation, ExtremumKind, OSCILLATION_DROP_THRESHOLD};
use squeezelab::models::{self, ClassicalPumpModel, SizeSpec, TRACE_SIGNAL};
use squeezelab::propagate::PropagatorConfig;
use squeezelab::Result;

fn main() -> Result<()> {
    let grid = models::linear_grid(0.0, 3.0, 301)?;
    let model = ClassicalPumpModel {
        snapshot_stride: None,
        ..ClassicalPumpModel::new(3, SizeSpec::Sector(200))
    };
    let run = models::run_classical(&model, &grid, &PropagatorConfig::spectral())?;
    let trace = run.result.trace(TRACE_SIGNAL).unwrap();

    let cert = detect_oscillation(&grid, trace)?;
    eprintln!(
        "m = 200: {} extrema, relative drop {:.4}, certifies(>= {}): {}",
        cert.extrema.len(),
        cert.relative_drop,
        OSCILLATION_DROP_THRESHOLD,
        cert.certifies(OSCILLATION_DROP_THRESHOLD)
    );
    eprintln!("extremum positions shift with the truncation; the oscillation itself does not");

    println!("# n = 3 classical, m = 200");
    println!("# kind\tr\tn_a");
    for extremum in &cert.extrema {
        let kind = match extremum.kind {
            ExtremumKind::Maximum => "max",
            ExtremumKind::Minimum => "min",
        };
        println!("{kind}\t{:.4}\t{:.8e}", extremum.r, extremum.value);
    }
    Ok(())
}
