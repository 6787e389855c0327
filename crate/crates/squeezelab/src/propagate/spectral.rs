//! Spectral propagator: one eigendecomposition, exact grid evaluation.
//!
//! Every generator here is `H = i·A + D` with `A` real antisymmetric
//! tridiagonal and `D` real diagonal. The unitary `U = diag(iʲ)` maps `H` to
//! the real symmetric tridiagonal `T = U† H U` whose off-diagonal is the band
//! of `A`, so one real eigendecomposition `T = V Λ Vᵀ` gives
//! `ψ(r) = U V e^{−i r Λ} Vᵀ U† ψ₀` at every grid point.

use num_complex::Complex64;

use crate::error::Result;
use crate::fock::{Generator, StateVector};
use crate::propagate::{EvolutionResult, Recorder, TraceRequest};
use crate::tridiag;

/// Powers of `i` by exponent mod 4.
const PHASE: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

/// Evolve `psi0` to every point of `r_grid` by exact diagonalization.
pub fn evolve_spectral(
    gen: &Generator,
    psi0: &StateVector,
    r_grid: &[f64],
    request: &TraceRequest,
) -> Result<EvolutionResult> {
    let mut rec = Recorder::new(gen, psi0, r_grid, request)?;
    let dim = gen.dim();
    let dec = tridiag::decompose(gen.diagonal(), gen.band())?;
    let vectors = dec.vectors();
    let values = dec.values();

    // phi = U† psi0, with U = diag(i^j).
    let phi: Vec<Complex64> = psi0
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(j, a)| PHASE[j % 4].conj() * a)
        .collect();
    // c = Vᵀ phi (columns of V are contiguous).
    let coeffs: Vec<Complex64> = (0..dim)
        .map(|j| {
            let col = &vectors[j * dim..(j + 1) * dim];
            col.iter()
                .zip(&phi)
                .map(|(v, p)| p * *v)
                .sum()
        })
        .collect();

    let mut w = vec![Complex64::new(0.0, 0.0); dim];
    let mut psi = vec![Complex64::new(0.0, 0.0); dim];
    for (gi, &r) in rec.grid().to_vec().iter().enumerate() {
        w.fill(Complex64::new(0.0, 0.0));
        for j in 0..dim {
            let rotated = coeffs[j] * Complex64::cis(-r * values[j]);
            if rotated.norm_sqr() == 0.0 {
                continue;
            }
            let col = &vectors[j * dim..(j + 1) * dim];
            for (wk, v) in w.iter_mut().zip(col) {
                *wk += rotated * *v;
            }
        }
        for (k, (p, wk)) in psi.iter_mut().zip(&w).enumerate() {
            *p = PHASE[k % 4] * wk;
        }
        rec.record(gi, &psi)?;
    }
    Ok(rec.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{
        build_classical_generator, build_quantum_pump_chain, build_sector_basis,
        number_observable,
    };
    use crate::propagate::Observable;
    use approx::assert_abs_diff_eq;

    fn grid(max: f64, points: usize) -> Vec<f64> {
        (0..points)
            .map(|i| max * i as f64 / (points - 1) as f64)
            .collect()
    }

    #[test]
    fn displacement_photon_number_is_r_squared() {
        let basis = build_sector_basis(1, 0, 64).unwrap();
        let gen = build_classical_generator(&basis).unwrap();
        let psi0 = StateVector::vacuum(64).unwrap();
        let request = TraceRequest::observables(vec![Observable::new(
            "n",
            number_observable(&basis),
        )]);
        let r_grid = grid(1.0, 11);
        let result = evolve_spectral(&gen, &psi0, &r_grid, &request).unwrap();
        for (r, n) in r_grid.iter().zip(result.trace("n").unwrap()) {
            assert_abs_diff_eq!(*n, r * r, epsilon = 1e-8);
        }
        assert!(result.norm_drift <= 1e-10);
    }

    #[test]
    fn squeezed_vacuum_photon_number() {
        let basis = build_sector_basis(2, 0, 60).unwrap();
        let gen = build_classical_generator(&basis).unwrap();
        let psi0 = StateVector::vacuum(60).unwrap();
        let request = TraceRequest::observables(vec![Observable::new(
            "n",
            number_observable(&basis),
        )]);
        let result = evolve_spectral(&gen, &psi0, &[0.25], &request).unwrap();
        let expect = (2.0 * 0.25f64).sinh().powi(2);
        let got = result.trace("n").unwrap()[0];
        assert!(
            (got - expect).abs() <= 1e-6 * expect,
            "got {got}, expected {expect}"
        );
        assert!(result.max_leakage() < 1e-10);
    }

    #[test]
    fn two_level_pump_rabi_solution() {
        let (gen, labels) = build_quantum_pump_chain(3, 1).unwrap();
        let psi0 = StateVector::vacuum(2).unwrap();
        let request = TraceRequest::observables(vec![Observable::new(
            "n_a",
            labels.signal_observable(),
        )]);
        let omega = 6.0f64.sqrt();
        let r_grid = grid(2.0 * std::f64::consts::PI / omega, 101);
        let result = evolve_spectral(&gen, &psi0, &r_grid, &request).unwrap();
        for (r, n) in r_grid.iter().zip(result.trace("n_a").unwrap()) {
            let expect = 3.0 * (omega * r).sin().powi(2);
            assert_abs_diff_eq!(*n, expect, epsilon = 1e-9);
        }
    }

    #[test]
    fn zero_grid_is_identity() {
        let basis = build_sector_basis(3, 0, 10).unwrap();
        let gen = build_classical_generator(&basis).unwrap();
        let psi0 = StateVector::basis_state(10, 2).unwrap();
        let request = TraceRequest::observables(vec![Observable::new(
            "n",
            number_observable(&basis),
        )])
        .with_snapshots(1);
        let result = evolve_spectral(&gen, &psi0, &[0.0], &request).unwrap();
        assert_abs_diff_eq!(result.trace("n").unwrap()[0], 6.0, epsilon = 1e-12);
        let snap = &result.snapshots[0];
        for (a, b) in snap.state.amplitudes().iter().zip(psi0.amplitudes()) {
            assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn negative_grid_points_are_supported() {
        let basis = build_sector_basis(1, 0, 32).unwrap();
        let gen = build_classical_generator(&basis).unwrap();
        let psi0 = StateVector::vacuum(32).unwrap();
        let request = TraceRequest::observables(vec![Observable::new(
            "n",
            number_observable(&basis),
        )]);
        let result = evolve_spectral(&gen, &psi0, &[-1.0, 0.0, 1.0], &request).unwrap();
        let trace = result.trace("n").unwrap();
        // Displacement by −r and r give the same photon number.
        assert_abs_diff_eq!(trace[0], 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(trace[1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(trace[2], 1.0, epsilon = 1e-8);
    }

    #[test]
    fn rejects_unsorted_grid() {
        let basis = build_sector_basis(1, 0, 8).unwrap();
        let gen = build_classical_generator(&basis).unwrap();
        let psi0 = StateVector::vacuum(8).unwrap();
        let request = TraceRequest::default();
        assert!(evolve_spectral(&gen, &psi0, &[1.0, 0.5], &request).is_err());
    }
}
