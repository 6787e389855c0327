//! A Kerr term χ(a†a)² confines the dynamics and removes the truncation
//! dependence: with χ = 0.2 the n = 3 traces converge once the diagonal
//! dominates the band, while the χ = 0 model never settles.
//!
//! Run: cargo run --release -p squeezelab --example kerr_regularization

use squeezelab::analysis::{kerr_convergence, KERR_CONVERGENCE_TOL};
use squeezelab::models::{self, ClassicalPumpModel, SizeSpec, TRACE_SIGNAL};
use squeezelab::propagate::PropagatorConfig;
use squeezelab::Result;

fn main() -> Result<()> {
    let grid = models::linear_grid(0.0, 3.0, 151)?;
    let cfg = PropagatorConfig::spectral();
    let sizes = [24usize, 25, 36, 37, 48, 49, 60, 61, 80, 81];

    let report = kerr_convergence(3, 0.2, &sizes, &grid, KERR_CONVERGENCE_TOL, &cfg)?;
    eprintln!("chi = 0.2, sizes {sizes:?}");
    for (pair, delta) in sizes.windows(2).zip(&report.adjacent_deltas) {
        eprintln!("  m {:>3} -> {:>3}: adjacent delta {delta:.3e}", pair[0], pair[1]);
    }
    match report.converged_from {
        Some(m) => eprintln!("converged (tolerance {:.0e}) from m = {m}", report.tolerance),
        None => eprintln!("no convergence within the tested sizes"),
    }
    eprintln!(
        "parity ratio with the Kerr term: {:.2} (drastic: {})",
        report.parity.ratio,
        report.parity.is_drastic()
    );

    // Final regularized trace next to the two unregularized parity traces.
    let trace_of = |m: usize, chi: f64| -> Result<Vec<f64>> {
        let model = ClassicalPumpModel {
            snapshot_stride: None,
            ..ClassicalPumpModel::new(3, SizeSpec::Sector(m)).with_chi(chi)
        };
        let run = models::run_classical(&model, &grid, &cfg)?;
        Ok(run.result.trace(TRACE_SIGNAL).unwrap().to_vec())
    };
    let regular = trace_of(81, 0.2)?;
    let bare_even = trace_of(80, 0.0)?;
    let bare_odd = trace_of(81, 0.0)?;

    println!("# n = 3 classical; Kerr chi = 0.2 vs unregularized");
    println!("# r\tn_a(chi=0.2)\tn_a(chi=0, m=80)\tn_a(chi=0, m=81)");
    for (i, r) in grid.iter().enumerate() {
        println!("{r:.3}\t{:.8e}\t{:.8e}\t{:.8e}", regular[i], bare_even[i], bare_odd[i]);
    }
    Ok(())
}
