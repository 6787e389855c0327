//! Classical-pump evolutions for orders 1-3, checked against the two
//! closed forms that exist: ⟨n⟩ = r² (n = 1) and ⟨n⟩ = sinh²(2r) (n = 2).
//!
//! Run: cargo run --release -p squeezelab --example classical_squeezing

use squeezelab::models::{self, ClassicalPumpModel, SizeSpec, TRACE_SIGNAL};
use squeezelab::propagate::PropagatorConfig;
use squeezelab::Result;

fn trace(n: u32, m: usize, grid: &[f64]) -> Result<Vec<f64>> {
    let model = ClassicalPumpModel {
        snapshot_stride: None,
        ..ClassicalPumpModel::new(n, SizeSpec::Sector(m))
    };
    let run = models::run_classical(&model, grid, &PropagatorConfig::spectral())?;
    Ok(run.result.trace(TRACE_SIGNAL).unwrap().to_vec())
}

fn main() -> Result<()> {
    let grid = models::linear_grid(0.0, 1.0, 51)?;

    // Sector sizes chosen so the state never reaches the truncation edge.
    let displacement = trace(1, 64, &grid)?;
    let squeezing = trace(2, 460, &grid)?;
    let third = trace(3, 200, &grid)?;

    let mut err1 = 0.0f64;
    let mut err2 = 0.0f64;
    for (i, r) in grid.iter().enumerate() {
        err1 = err1.max((displacement[i] - r * r).abs());
        err2 = err2.max((squeezing[i] - (2.0 * r).sinh().powi(2)).abs());
    }
    eprintln!("displacement oracle |⟨n⟩ - r²|        <= {err1:.2e}");
    eprintln!("squeezing oracle    |⟨n⟩ - sinh²(2r)| <= {err2:.2e}");
    eprintln!("n = 3 has no closed form; its trace depends on the truncation");

    println!("# classical pump, vacuum start, spectral method");
    println!("# r\tn_a(n=1)\tn_a(n=2)\tn_a(n=3, m=200)");
    for (i, r) in grid.iter().enumerate() {
        println!(
            "{r:.3}\t{:.8e}\t{:.8e}\t{:.8e}",
            displacement[i], squeezing[i], third[i]
        );
    }
    Ok(())
}
