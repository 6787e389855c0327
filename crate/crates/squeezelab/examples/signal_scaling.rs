//! Signal-photon scaling: with a quantized pump of N photons the signal
//! response on the effective axis grows like N^0.5 rather than without
//! bound, for both a peak and a grid-mean response definition.
//!
//! Run: cargo run --release -p squeezelab --example signal_scaling

use squeezelab::analysis::{fit_scaling, ScalingWindow};
use squeezelab::propagate::PropagatorConfig;
use squeezelab::Result;

fn main() -> Result<()> {
    // Log-spaced even pump sizes; parity classes must not be mixed.
    let pump_values = [50u64, 74, 110, 162, 240, 356, 528, 782];
    let fit = fit_scaling(
        3,
        &pump_values,
        &ScalingWindow::default(),
        &PropagatorConfig::spectral(),
    )?;

    eprintln!(
        "peak response: exponent {:.4} (residual rms {:.3e})",
        fit.peak_fit.exponent, fit.peak_fit.residual_rms
    );
    eprintln!(
        "mean response: exponent {:.4} (residual rms {:.3e})",
        fit.mean_fit.exponent, fit.mean_fit.residual_rms
    );
    eprintln!("both sit near 0.5: the signal grows like sqrt(N)");

    println!("# n = 3 quantum pump, even N, effective window r in [0, 3]");
    println!("# N\tpeak_n_a\tmean_n_a\tpeak_fit\tmean_fit");
    for (i, pump_photons) in fit.pump_values.iter().enumerate() {
        let x = (*pump_photons as f64).ln();
        let peak_model = (fit.peak_fit.log_intercept + fit.peak_fit.exponent * x).exp();
        let mean_model = (fit.mean_fit.log_intercept + fit.mean_fit.exponent * x).exp();
        println!(
            "{pump_photons}\t{:.8e}\t{:.8e}\t{:.8e}\t{:.8e}",
            fit.peak_response[i], fit.mean_response[i], peak_model, mean_model
        );
    }
    Ok(())
}
