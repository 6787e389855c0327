//! Krylov propagator: adaptive Lanczos substepping.
//!
//! Each substep builds a Lanczos basis of the Krylov space `K_k(H, ψ)` with
//! full re-orthogonalization, then exploits that the basis does not depend on
//! the step size: the largest `Δr` whose a-posteriori error estimate fits the
//! per-unit-r budget is chosen by halving, and all grid points inside the
//! accepted substep are evaluated from the same basis (dense output). The
//! error estimate is the norm difference between the order-`k` and
//! order-`k−1` propagated coefficient vectors.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{Generator, StateVector};
use crate::propagate::{
    complex_norm, split_grid, EvolutionResult, PropagatorConfig, Recorder, TraceRequest,
};
use crate::tridiag::{self, Decomposition};

/// Relative off-diagonal size treated as a happy breakdown.
const BREAKDOWN_REL: f64 = 1e-13;

/// Evolve `psi0` over `r_grid` with adaptive Lanczos substeps.
pub fn evolve_krylov(
    gen: &Generator,
    psi0: &StateVector,
    r_grid: &[f64],
    request: &TraceRequest,
    cfg: &PropagatorConfig,
) -> Result<EvolutionResult> {
    cfg.validate()?;
    let mut rec = Recorder::new(gen, psi0, r_grid, request)?;
    let grid = rec.grid().to_vec();
    let (negative, nonnegative) = split_grid(&grid);
    walk_branch(gen, psi0, &grid, &nonnegative, cfg, &mut rec)?;
    walk_branch(gen, psi0, &grid, &negative, cfg, &mut rec)?;
    Ok(rec.finish())
}

/// Walk one sign branch of the grid outward from the origin.
fn walk_branch(
    gen: &Generator,
    psi0: &StateVector,
    grid: &[f64],
    targets: &[usize],
    cfg: &PropagatorConfig,
    rec: &mut Recorder,
) -> Result<()> {
    if targets.is_empty() {
        return Ok(());
    }
    let hnorm = gen.norm_bound().max(f64::MIN_POSITIVE);
    let branch_end = grid[*targets.last().unwrap()];
    let span = branch_end.abs().max(f64::MIN_POSITIVE);
    let budget_rate = cfg.tolerance / span;
    let dr_cap = cfg.max_substep / hnorm;
    let min_dr = f64::EPSILON * span;

    let mut psi = psi0.amplitudes().to_vec();
    let mut r_cur = 0.0f64;
    let mut ti = 0usize;
    while ti < targets.len() {
        while ti < targets.len() && grid[targets[ti]] == r_cur {
            rec.record(targets[ti], &psi)?;
            ti += 1;
        }
        if ti == targets.len() {
            break;
        }
        let remaining = branch_end - r_cur;
        let basis = LanczosBasis::build(gen, &psi, cfg.krylov_max_dim, hnorm)?;
        let mut dr = if basis.exact || remaining.abs() <= dr_cap {
            remaining
        } else {
            dr_cap.copysign(remaining)
        };
        if !basis.exact {
            loop {
                let est = basis.step_error(dr);
                if est <= budget_rate * dr.abs() {
                    break;
                }
                dr *= 0.5;
                if dr.abs() < min_dr {
                    return Err(Error::KrylovStall {
                        max_dim: cfg.krylov_max_dim,
                        residual: est,
                        substep: dr.abs(),
                    });
                }
            }
        }
        let reach = r_cur + dr;
        // Dense output for every grid point inside the accepted substep;
        // the walk resumes from the last one hit so grid values stay exact.
        let mut inner_last: Option<Vec<Complex64>> = None;
        let mut r_last = r_cur;
        while ti < targets.len() {
            let rt = grid[targets[ti]];
            let inside = if dr > 0.0 { rt <= reach } else { rt >= reach };
            if !inside {
                break;
            }
            let state = basis.state_at(rt - r_cur);
            rec.record(targets[ti], &state)?;
            r_last = rt;
            inner_last = Some(state);
            ti += 1;
        }
        match inner_last {
            Some(state) => {
                psi = state;
                r_cur = r_last;
            }
            None => {
                psi = basis.state_at(dr);
                r_cur = reach;
            }
        }
    }
    Ok(())
}

/// Lanczos basis of `K_k(H, ψ)` with the tridiagonal projections of `H`.
struct LanczosBasis {
    vectors: Vec<Vec<Complex64>>,
    init_norm: f64,
    /// Happy breakdown: the span is invariant and propagation in it is exact.
    exact: bool,
    dec_full: Decomposition,
    dec_small: Option<Decomposition>,
}

impl LanczosBasis {
    fn build(gen: &Generator, psi: &[Complex64], max_dim: usize, hnorm: f64) -> Result<Self> {
        let dim = psi.len();
        let kmax = max_dim.min(dim);
        let init_norm = complex_norm(psi);
        if init_norm == 0.0 || !init_norm.is_finite() {
            return Err(Error::Numerical(format!(
                "cannot propagate state with norm {init_norm}"
            )));
        }
        let breakdown = hnorm.max(1.0) * BREAKDOWN_REL;

        let mut vectors: Vec<Vec<Complex64>> =
            vec![psi.iter().map(|a| a / init_norm).collect()];
        let mut alphas: Vec<f64> = Vec::with_capacity(kmax);
        let mut betas: Vec<f64> = Vec::with_capacity(kmax);
        let mut w = vec![Complex64::new(0.0, 0.0); dim];
        let mut exact = false;
        loop {
            let q = vectors.last().unwrap();
            gen.apply(q, &mut w);
            alphas.push(inner(q, &w).re);
            // Two Gram-Schmidt passes against the whole basis keep the
            // vectors orthogonal to machine precision.
            for _ in 0..2 {
                for v in &vectors {
                    let c = inner(v, &w);
                    for (wi, vi) in w.iter_mut().zip(v) {
                        *wi -= c * vi;
                    }
                }
            }
            let beta = complex_norm(&w);
            if beta <= breakdown {
                exact = true;
                break;
            }
            if vectors.len() == kmax {
                break;
            }
            betas.push(beta);
            vectors.push(w.iter().map(|x| x / beta).collect());
        }

        let k = alphas.len();
        let dec_full = tridiag::decompose(&alphas, &betas)?;
        let dec_small = if k >= 2 {
            Some(tridiag::decompose(&alphas[..k - 1], &betas[..k - 2])?)
        } else {
            None
        };
        Ok(Self {
            vectors,
            init_norm,
            exact,
            dec_full,
            dec_small,
        })
    }

    /// Coefficients of `exp(−i δ T) (‖ψ‖ e₁)` in the Lanczos basis.
    fn coefficients(dec: &Decomposition, delta: f64, scale: f64) -> Vec<Complex64> {
        let k = dec.dim();
        let vectors = dec.vectors();
        let values = dec.values();
        let mut u = vec![Complex64::new(0.0, 0.0); k];
        for j in 0..k {
            let col = &vectors[j * k..(j + 1) * k];
            let weight = Complex64::cis(-delta * values[j]) * (col[0] * scale);
            for (ui, v) in u.iter_mut().zip(col) {
                *ui += weight * *v;
            }
        }
        u
    }

    /// Norm difference between the order-`k` and order-`k−1` propagations.
    fn step_error(&self, delta: f64) -> f64 {
        let small = match &self.dec_small {
            Some(dec) => dec,
            None => return 0.0,
        };
        let full = Self::coefficients(&self.dec_full, delta, 1.0);
        let part = Self::coefficients(small, delta, 1.0);
        let mut diff = 0.0f64;
        for (i, f) in full.iter().enumerate() {
            let p = part.get(i).copied().unwrap_or_default();
            diff += (f - p).norm_sqr();
        }
        diff.sqrt()
    }

    /// The propagated state `exp(−i δ H) ψ` reconstructed in the full basis.
    fn state_at(&self, delta: f64) -> Vec<Complex64> {
        let u = Self::coefficients(&self.dec_full, delta, self.init_norm);
        let dim = self.vectors[0].len();
        let mut psi = vec![Complex64::new(0.0, 0.0); dim];
        for (ui, q) in u.iter().zip(&self.vectors) {
            for (pi, qi) in psi.iter_mut().zip(q) {
                *pi += ui * qi;
            }
        }
        psi
    }
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{
        build_classical_generator, build_quantum_pump_chain, build_sector_basis,
        number_observable,
    };
    use crate::propagate::{evolve_spectral, Observable};
    use approx::assert_abs_diff_eq;

    fn grid(max: f64, points: usize) -> Vec<f64> {
        (0..points)
            .map(|i| max * i as f64 / (points - 1) as f64)
            .collect()
    }

    #[test]
    fn matches_spectral_on_order_three() {
        let basis = build_sector_basis(3, 0, 40).unwrap();
        let gen = build_classical_generator(&basis).unwrap();
        let psi0 = StateVector::vacuum(40).unwrap();
        let request = TraceRequest::observables(vec![Observable::new(
            "n",
            number_observable(&basis),
        )]);
        let r_grid = grid(1.0, 21);
        let exact = evolve_spectral(&gen, &psi0, &r_grid, &request).unwrap();
        let cfg = PropagatorConfig::krylov();
        let approx = evolve_krylov(&gen, &psi0, &r_grid, &request, &cfg).unwrap();
        for (a, b) in exact
            .trace("n")
            .unwrap()
            .iter()
            .zip(approx.trace("n").unwrap())
        {
            assert_abs_diff_eq!(a, b, epsilon = 1e-9);
        }
        assert!(approx.norm_drift <= 1e-10);
    }

    #[test]
    fn zero_grid_is_identity() {
        let basis = build_sector_basis(2, 0, 16).unwrap();
        let gen = build_classical_generator(&basis).unwrap();
        let psi0 = StateVector::basis_state(16, 3).unwrap();
        let request = TraceRequest::observables(vec![Observable::new(
            "n",
            number_observable(&basis),
        )]);
        let cfg = PropagatorConfig::krylov();
        let result = evolve_krylov(&gen, &psi0, &[0.0], &request, &cfg).unwrap();
        assert_abs_diff_eq!(result.trace("n").unwrap()[0], 6.0, epsilon = 1e-12);
    }

    #[test]
    fn small_chain_is_exact_by_breakdown() {
        let (gen, labels) = build_quantum_pump_chain(3, 1).unwrap();
        let psi0 = StateVector::vacuum(2).unwrap();
        let request = TraceRequest::observables(vec![Observable::new(
            "n_a",
            labels.signal_observable(),
        )]);
        let omega = 6.0f64.sqrt();
        let r_grid = grid(2.0 * std::f64::consts::PI / omega, 41);
        let cfg = PropagatorConfig::krylov();
        let result = evolve_krylov(&gen, &psi0, &r_grid, &request, &cfg).unwrap();
        for (r, n) in r_grid.iter().zip(result.trace("n_a").unwrap()) {
            let expect = 3.0 * (omega * r).sin().powi(2);
            assert_abs_diff_eq!(*n, expect, epsilon = 1e-9);
        }
    }

    #[test]
    fn negative_and_positive_branches_agree_with_symmetry() {
        let basis = build_sector_basis(1, 0, 48).unwrap();
        let gen = build_classical_generator(&basis).unwrap();
        let psi0 = StateVector::vacuum(48).unwrap();
        let request = TraceRequest::observables(vec![Observable::new(
            "n",
            number_observable(&basis),
        )]);
        let cfg = PropagatorConfig::krylov();
        let result = evolve_krylov(&gen, &psi0, &[-0.7, 0.0, 0.7], &request, &cfg).unwrap();
        let trace = result.trace("n").unwrap();
        assert_abs_diff_eq!(trace[0], trace[2], epsilon = 1e-10);
        assert_abs_diff_eq!(trace[0], 0.49, epsilon = 1e-8);
    }
}
