//! Low-lying spectra across truncation sizes: for n = 3 the even and odd
//! families converge to two distinct spectra (two different self-adjoint
//! operators); for n = 1 both converge to the same one.
//!
//! Run: cargo run --release -p squeezelab --example spectrum_convergence

use squeezelab::analysis::{
    extension_convergence, matched_eigenvalue_distance, nearest_eigenvalue_distance, spectrum,
};
use squeezelab::fock::{build_classical_generator, build_sector_basis};
use squeezelab::Result;

fn main() -> Result<()> {
    // Every generator here is i·(band) with zero diagonal, so the spectrum
    // pairs as ±λ and odd dimensions carry an exact zero mode.
    let odd_dim = spectrum(&build_classical_generator(&build_sector_basis(3, 0, 31)?)?)?;
    eprintln!(
        "m = 31: min |lambda| = {:.2e}, pairing defect {:.2e}",
        odd_dim.min_abs,
        odd_dim.pairing_defect.unwrap()
    );

    let count = 6;
    let even = extension_convergence(3, &[120, 122, 124, 126], count)?;
    let odd = extension_convergence(3, &[121, 123, 125, 127], count)?;
    eprintln!(
        "n = 3 final intra-class gaps: even {:.3}, odd {:.3}",
        even.final_intra_gap(),
        odd.final_intra_gap()
    );
    eprintln!(
        "n = 3 cross-class distance: matched {:.3}, nearest {:.3}  (two distinct limits)",
        matched_eigenvalue_distance(even.final_values(), odd.final_values()),
        nearest_eigenvalue_distance(even.final_values(), odd.final_values())
    );

    let control_even = extension_convergence(1, &[120, 122, 124, 126], count)?;
    let control_odd = extension_convergence(1, &[121, 123, 125, 127], count)?;
    eprintln!(
        "n = 1 control: matched cross-class distance {:.3e}  (one common limit)",
        matched_eigenvalue_distance(control_even.final_values(), control_odd.final_values())
    );

    println!("# n = 3, lowest {count} nonnegative eigenvalues per size");
    println!("# size\tindex\tlambda");
    for table in [&even, &odd] {
        for (size, values) in table.sizes.iter().zip(&table.eigenvalues) {
            for (index, lambda) in values.iter().enumerate() {
                println!("{size}\t{index}\t{lambda:.8e}");
            }
        }
    }
    Ok(())
}
