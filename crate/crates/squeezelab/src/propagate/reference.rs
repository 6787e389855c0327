//! Reference propagator: adaptive Dormand-Prince 5(4) integration.
//!
//! Integrates `dψ/dr = −i H ψ` at a fixed tight tolerance with
//! error-per-unit-step control, landing exactly on every grid point. It is
//! deliberately independent of the eigensolver-based methods and serves as
//! the oracle for cross-method agreement tests; the `dim ≤ 1024` cap keeps
//! it in the regime where explicit integration is practical.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{Generator, StateVector};
use crate::propagate::{split_grid, EvolutionResult, Recorder, TraceRequest};

/// Fixed error-per-unit-step tolerance of the oracle.
const RK_TOLERANCE: f64 = 1e-12;
/// Largest dimension the oracle accepts.
const MAX_DIM: usize = 1024;
/// Hard cap on integration steps per run.
const MAX_STEPS: usize = 20_000_000;

const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
/// Difference between the 5th- and 4th-order weights (error estimator).
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Evolve `psi0` over `r_grid` by high-order adaptive integration.
pub fn evolve_reference(
    gen: &Generator,
    psi0: &StateVector,
    r_grid: &[f64],
    request: &TraceRequest,
) -> Result<EvolutionResult> {
    if gen.dim() > MAX_DIM {
        return Err(Error::Domain(format!(
            "reference propagator is limited to dim <= {MAX_DIM}, got {}",
            gen.dim()
        )));
    }
    let mut rec = Recorder::new(gen, psi0, r_grid, request)?;
    let grid = rec.grid().to_vec();
    let (negative, nonnegative) = split_grid(&grid);
    integrate_branch(gen, psi0, &grid, &nonnegative, &mut rec)?;
    integrate_branch(gen, psi0, &grid, &negative, &mut rec)?;
    Ok(rec.finish())
}

/// `out = −i H y`.
fn derivative(gen: &Generator, y: &[Complex64], out: &mut [Complex64]) {
    gen.apply(y, out);
    for v in out.iter_mut() {
        *v = Complex64::new(v.im, -v.re);
    }
}

fn rms(v: &[Complex64]) -> f64 {
    (v.iter().map(|x| x.norm_sqr()).sum::<f64>() / v.len() as f64).sqrt()
}

/// Integrate one sign branch of the grid outward from the origin.
fn integrate_branch(
    gen: &Generator,
    psi0: &StateVector,
    grid: &[f64],
    targets: &[usize],
    rec: &mut Recorder,
) -> Result<()> {
    if targets.is_empty() {
        return Ok(());
    }
    let dim = gen.dim();
    let direction = if grid[*targets.last().unwrap()] >= 0.0 {
        1.0
    } else {
        -1.0
    };
    let hnorm = gen.norm_bound().max(1.0);

    let mut y = psi0.amplitudes().to_vec();
    let mut r = 0.0f64;
    let mut k: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); dim]; 7];
    let mut ytmp = vec![Complex64::new(0.0, 0.0); dim];
    let mut ynew = vec![Complex64::new(0.0, 0.0); dim];
    let mut err_vec = vec![Complex64::new(0.0, 0.0); dim];
    derivative(gen, &y, &mut k[0]);
    let mut h = direction * (0.01 / hnorm);
    let mut steps = 0usize;

    for &target in targets {
        let rt = grid[target];
        while r != rt {
            steps += 1;
            if steps > MAX_STEPS {
                return Err(Error::Numerical(format!(
                    "reference integrator exceeded {MAX_STEPS} steps at r = {r:.6e}"
                )));
            }
            // Never overshoot the next grid point; a clamped landing leaves
            // the controller's step proposal untouched for the next leg.
            let clamped = (rt - r).abs() <= h.abs();
            let h_step = if clamped { rt - r } else { h };
            if h_step.abs() < 16.0 * f64::EPSILON * r.abs().max(rt.abs()).max(1.0) {
                return Err(Error::StepUnderflow { r, step: h_step });
            }

            stage(&y, &k, &A2, h_step, &mut ytmp);
            derivative(gen, &ytmp, &mut k[1]);
            stage(&y, &k, &A3, h_step, &mut ytmp);
            derivative(gen, &ytmp, &mut k[2]);
            stage(&y, &k, &A4, h_step, &mut ytmp);
            derivative(gen, &ytmp, &mut k[3]);
            stage(&y, &k, &A5, h_step, &mut ytmp);
            derivative(gen, &ytmp, &mut k[4]);
            stage(&y, &k, &A6, h_step, &mut ytmp);
            derivative(gen, &ytmp, &mut k[5]);
            stage(&y, &k, &B, h_step, &mut ynew);
            derivative(gen, &ynew, &mut k[6]);

            for i in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for (s, ks) in k.iter().enumerate() {
                    acc += E[s] * ks[i];
                }
                err_vec[i] = acc * h_step;
            }
            let err = rms(&err_vec);
            let budget = RK_TOLERANCE * h_step.abs();
            let accepted = err <= budget;
            if accepted {
                r = if clamped { rt } else { r + h_step };
                std::mem::swap(&mut y, &mut ynew);
                // First-same-as-last: k7 is the derivative at the new state.
                k.swap(0, 6);
            }
            if !(clamped && accepted) {
                let factor = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * (budget / err).powf(0.25)).clamp(0.2, 5.0)
                };
                h = h_step * factor;
            }
        }
        rec.record(target, &y)?;
    }
    Ok(())
}

/// `out = y + h Σ coeff[s]·k[s]`.
fn stage(y: &[Complex64], k: &[Vec<Complex64>], coeff: &[f64], h: f64, out: &mut [Complex64]) {
    for i in 0..y.len() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (s, c) in coeff.iter().enumerate() {
            if *c != 0.0 {
                acc += *c * k[s][i];
            }
        }
        out[i] = y[i] + h * acc;
    }
}
