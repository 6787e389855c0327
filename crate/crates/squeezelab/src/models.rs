//! The three physical models: classical pump, quantum pump, and the
//! Poisson-weighted coherent-pump ensemble.
//!
//! The classical-pump model evolves a truncated single-mode sector under
//! `H_n = i[(a†)ⁿ − aⁿ]`, optionally Kerr-regularized. The quantum-pump
//! model evolves the exactly finite invariant chain of
//! `i[b(a†)ⁿ − b†aⁿ]`. The ensemble averages quantum-pump runs over a
//! Poisson distribution of initial pump photon numbers, as a coherent pump
//! state prepares them.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{
    build_classical_generator, build_kerr_diagonal, build_quantum_pump_chain, build_sector_basis,
    number_observable, sector_size_for_total_dim, PumpChainLabels, StateVector,
};
use crate::propagate::{self, EvolutionResult, Observable, PropagatorConfig, TraceRequest};

/// Signal-mode photon number trace name.
pub const TRACE_SIGNAL: &str = "n_a";
/// Pump-mode photon number trace name.
pub const TRACE_PUMP: &str = "n_b";
/// Pump depletion fraction trace name.
pub const TRACE_DEPLETION: &str = "depletion";
/// Even-pump-number partial ensemble trace name.
pub const TRACE_SIGNAL_EVEN: &str = "n_a_even";
/// Odd-pump-number partial ensemble trace name.
pub const TRACE_SIGNAL_ODD: &str = "n_a_odd";

/// Leakage level above which a classical run is flagged truncation-dominated.
pub const LEAKAGE_WARN_THRESHOLD: f64 = 1e-6;
/// Default snapshot spacing in grid points.
pub const DEFAULT_SNAPSHOT_STRIDE: usize = 10;
/// Default Poisson tail mass left outside the ensemble window.
pub const DEFAULT_TAIL_EPSILON: f64 = 1e-8;
/// Default cap on pump photon numbers admitted to an ensemble window.
pub const DEFAULT_PUMP_CAP: u64 = 4096;

/// Truncation size given either per-sector or as a total Fock dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SizeSpec {
    /// Number of retained states in the residue-0 sector.
    Sector(usize),
    /// Total Fock dimension; maps to `⌈D/n⌉` sector states.
    TotalDim(usize),
}

impl SizeSpec {
    /// Resolve to a sector size for order `n`.
    pub fn sector_size(self, n: u32) -> Result<usize> {
        match self {
            SizeSpec::Sector(m) => Ok(m),
            SizeSpec::TotalDim(d) => sector_size_for_total_dim(n, 0, d),
        }
    }
}

/// Even/odd character of a truncation size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(size: usize) -> Self {
        if size.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn of_pump(pump_photons: u64) -> Self {
        Self::of(pump_photons as usize)
    }

    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Uniform grid from `start` to `end` inclusive.
pub fn linear_grid(start: f64, end: f64, points: usize) -> Result<Vec<f64>> {
    if points < 1 {
        return Err(Error::Domain("grid needs at least one point".into()));
    }
    if !(start.is_finite() && end.is_finite()) || end < start {
        return Err(Error::Domain(format!(
            "invalid grid bounds [{start}, {end}]"
        )));
    }
    if points == 1 {
        return Ok(vec![start]);
    }
    let step = (end - start) / (points - 1) as f64;
    let mut grid: Vec<f64> = (0..points).map(|i| start + step * i as f64).collect();
    grid[points - 1] = end;
    Ok(grid)
}

/// Default classical squeezing-parameter grid: `r ∈ [0, 3]`, 301 points.
pub fn default_classical_grid() -> Vec<f64> {
    linear_grid(0.0, 3.0, 301).expect("static grid bounds")
}

/// Default pump grid: `r̃` chosen so the effective `r = r̃√N` spans `[0, 3]`.
pub fn default_pump_grid(pump_photons: u64) -> Vec<f64> {
    let scale = (pump_photons.max(1) as f64).sqrt();
    linear_grid(0.0, 3.0 / scale, 301).expect("static grid bounds")
}

/// Effective squeezing parameter `r = r̃·√N` (meaningful for `N ≥ 1`).
pub fn effective_r(r_tilde: f64, pump_photons: u64) -> f64 {
    r_tilde * (pump_photons as f64).sqrt()
}

/// Pump grid whose effective parameters equal `r_grid`: `r̃ = r/√N`.
pub fn pump_grid_for_effective(r_grid: &[f64], pump_photons: u64) -> Vec<f64> {
    let scale = (pump_photons.max(1) as f64).sqrt();
    r_grid.iter().map(|r| r / scale).collect()
}

/// Truncated single-mode model under `H_n`, optionally Kerr-regularized.
#[derive(Debug, Clone)]
pub struct ClassicalPumpModel {
    pub n: u32,
    pub size: SizeSpec,
    /// Kerr coefficient of the `χ(a†a)²` diagonal.
    pub chi: f64,
    /// Initial state; vacuum when absent.
    pub initial: Option<StateVector>,
    pub snapshot_stride: Option<usize>,
}

impl ClassicalPumpModel {
    pub fn new(n: u32, size: SizeSpec) -> Self {
        Self {
            n,
            size,
            chi: 0.0,
            initial: None,
            snapshot_stride: Some(DEFAULT_SNAPSHOT_STRIDE),
        }
    }

    pub fn with_chi(mut self, chi: f64) -> Self {
        self.chi = chi;
        self
    }

    pub fn sector_size(&self) -> Result<usize> {
        self.size.sector_size(self.n)
    }
}

/// A completed classical-pump run with truncation metadata.
#[derive(Debug, Clone)]
pub struct ClassicalRun {
    pub result: EvolutionResult,
    /// Sector size actually evolved.
    pub sector_size: usize,
    /// Total Fock dimension covered by the sector.
    pub total_dim: usize,
    /// Parity of the sector size.
    pub parity: Parity,
    /// Set when leakage exceeded [`LEAKAGE_WARN_THRESHOLD`] anywhere; the
    /// truncation-dominated regime is expected and is itself under study.
    pub leakage_warning: bool,
}

/// Run the classical-pump model over `r_grid`.
pub fn run_classical(
    model: &ClassicalPumpModel,
    r_grid: &[f64],
    cfg: &PropagatorConfig,
) -> Result<ClassicalRun> {
    let m = model.sector_size()?;
    if m < 2 {
        return Err(Error::Domain(format!(
            "classical model needs sector size >= 2, got {m}"
        )));
    }
    let basis = build_sector_basis(model.n, 0, m)?;
    let mut gen = build_classical_generator(&basis)?;
    if model.chi != 0.0 {
        gen = gen.with_diagonal(build_kerr_diagonal(&basis, model.chi)?)?;
    }
    let psi0 = match &model.initial {
        Some(state) => state.clone(),
        None => StateVector::vacuum(m)?,
    };
    let request = TraceRequest {
        observables: vec![Observable::new(TRACE_SIGNAL, number_observable(&basis))],
        snapshot_stride: model.snapshot_stride,
        leakage_tail: None,
    };
    let result = propagate::evolve(&gen, &psi0, r_grid, &request, cfg)?;
    let leakage_warning = result.max_leakage() > LEAKAGE_WARN_THRESHOLD;
    let total_dim = match model.size {
        SizeSpec::TotalDim(d) => d,
        SizeSpec::Sector(m) => (m - 1) * model.n as usize + 1,
    };
    Ok(ClassicalRun {
        result,
        sector_size: m,
        total_dim,
        parity: Parity::of(m),
        leakage_warning,
    })
}

/// Quantum-pump chain model with its evolution grid.
#[derive(Debug, Clone)]
pub struct QuantumPumpModel {
    pub n: u32,
    /// Initial pump photon number `N`.
    pub pump_photons: u64,
    pub r_tilde_grid: Vec<f64>,
    pub snapshot_stride: Option<usize>,
}

impl QuantumPumpModel {
    pub fn new(n: u32, pump_photons: u64, r_tilde_grid: Vec<f64>) -> Self {
        Self {
            n,
            pump_photons,
            r_tilde_grid,
            snapshot_stride: Some(DEFAULT_SNAPSHOT_STRIDE),
        }
    }
}

/// A completed quantum-pump run with its chain labels.
#[derive(Debug, Clone)]
pub struct PumpRun {
    pub result: EvolutionResult,
    pub labels: PumpChainLabels,
}

/// Run the quantum-pump chain; results are exact for the model.
pub fn run_quantum_pump(model: &QuantumPumpModel, cfg: &PropagatorConfig) -> Result<PumpRun> {
    let (gen, labels) = build_quantum_pump_chain(model.n, model.pump_photons)?;
    let dim = gen.dim();
    let psi0 = StateVector::vacuum(dim)?;
    let n_over = model.pump_photons as f64;
    let depletion: Vec<f64> = (0..dim).map(|k| k as f64 / n_over).collect();
    let request = TraceRequest {
        observables: vec![
            Observable::new(TRACE_SIGNAL, labels.signal_observable()),
            Observable::new(TRACE_PUMP, labels.pump_observable()),
            Observable::new(TRACE_DEPLETION, depletion),
        ],
        snapshot_stride: model.snapshot_stride,
        leakage_tail: None,
    };
    let result = propagate::evolve(&gen, &psi0, &model.r_tilde_grid, &request, cfg)?;
    Ok(PumpRun { result, labels })
}

/// Conserved charge `⟨n_a + n·n_b⟩` at every stored snapshot.
pub fn conserved_charge_trace(run: &PumpRun) -> Result<Vec<f64>> {
    if run.result.snapshots.is_empty() {
        return Err(Error::Domain(
            "conserved charge needs a pump run with snapshots".into(),
        ));
    }
    let n = f64::from(run.labels.order());
    let signal = run.labels.signal_observable();
    let pump = run.labels.pump_observable();
    let weights: Vec<f64> = signal
        .iter()
        .zip(&pump)
        .map(|(s, p)| s + n * p)
        .collect();
    Ok(run
        .result
        .snapshots
        .iter()
        .map(|snap| snap.state.expectation(&weights))
        .collect())
}

/// Poisson-weighted ensemble of quantum-pump runs (coherent pump state).
#[derive(Debug, Clone)]
pub struct CoherentPumpEnsemble {
    pub n: u32,
    /// Mean pump photon number `|α|²`.
    pub mean_pump_photons: f64,
    /// Poisson mass allowed outside the retained window.
    pub tail_epsilon: f64,
    pub r_tilde_grid: Vec<f64>,
    /// Largest pump photon number the window may reach.
    pub max_pump_photons: u64,
}

impl CoherentPumpEnsemble {
    pub fn new(n: u32, mean_pump_photons: f64, r_tilde_grid: Vec<f64>) -> Self {
        Self {
            n,
            mean_pump_photons,
            tail_epsilon: DEFAULT_TAIL_EPSILON,
            r_tilde_grid,
            max_pump_photons: DEFAULT_PUMP_CAP,
        }
    }
}

/// Smallest Poisson window `[N_min, N_max]` with mass `≥ 1 − epsilon`,
/// grown greedily around the mode; returns `(N, P(N))` ascending.
pub fn poisson_window(mean: f64, epsilon: f64, cap: u64) -> Result<Vec<(u64, f64)>> {
    if !(mean > 0.0 && mean.is_finite()) {
        return Err(Error::Domain(format!(
            "Poisson mean must be positive and finite, got {mean}"
        )));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain(format!(
            "tail epsilon {epsilon} outside (0, 1)"
        )));
    }
    // Log-space recurrence keeps weights representable for any mean.
    let log_mean = mean.ln();
    let log_p = |k: u64| -> f64 {
        let mut lp = -mean;
        for j in 1..=k {
            lp += log_mean - (j as f64).ln();
        }
        lp
    };
    let p = |k: u64| log_p(k).exp();

    let center = (mean.floor() as u64).min(cap);
    let mut lo = center;
    let mut hi = center;
    let mut mass = p(center);
    while mass < 1.0 - epsilon {
        let below = if lo > 0 { Some(p(lo - 1)) } else { None };
        let above = if hi < cap { Some(p(hi + 1)) } else { None };
        match (below, above) {
            (Some(b), Some(a)) if b >= a => {
                lo -= 1;
                mass += b;
            }
            (_, Some(a)) => {
                hi += 1;
                mass += a;
            }
            (Some(b), None) => {
                lo -= 1;
                mass += b;
            }
            (None, None) => {
                return Err(Error::Domain(format!(
                    "Poisson window for mean {mean} cannot reach mass {} within cap {cap}",
                    1.0 - epsilon
                )));
            }
        }
    }
    Ok((lo..=hi).map(|k| (k, p(k))).collect())
}

/// A completed ensemble run with its window bookkeeping.
#[derive(Debug, Clone)]
pub struct EnsembleRun {
    /// Traces `n_a`, `n_a_even`, `n_a_odd` over the `r̃` grid.
    pub result: EvolutionResult,
    /// Retained `(N, P(N))` members, ascending in `N`.
    pub members: Vec<(u64, f64)>,
    pub retained_mass: f64,
    /// Total Poisson weight on even `N` within the window.
    pub even_weight: f64,
    /// Total Poisson weight on odd `N` within the window.
    pub odd_weight: f64,
}

/// Run the coherent-pump ensemble: Poisson-weighted sum of per-`N` runs.
///
/// Members evolve concurrently; the reduction is an ordered fold over
/// ascending `N`, so results do not depend on worker count.
pub fn run_coherent_ensemble(
    ensemble: &CoherentPumpEnsemble,
    cfg: &PropagatorConfig,
) -> Result<EnsembleRun> {
    let members = poisson_window(
        ensemble.mean_pump_photons,
        ensemble.tail_epsilon,
        ensemble.max_pump_photons,
    )?;
    let points = ensemble.r_tilde_grid.len();

    struct MemberOutcome {
        pump_photons: u64,
        weight: f64,
        signal: Vec<f64>,
        norm_error: Vec<f64>,
        leakage: Vec<f64>,
    }

    let outcomes: Vec<MemberOutcome> = members
        .par_iter()
        .map(|&(pump_photons, weight)| -> Result<MemberOutcome> {
            if pump_photons == 0 {
                // An empty pump drives nothing: the signal stays in vacuum.
                return Ok(MemberOutcome {
                    pump_photons,
                    weight,
                    signal: vec![0.0; points],
                    norm_error: vec![0.0; points],
                    leakage: vec![0.0; points],
                });
            }
            let model = QuantumPumpModel {
                n: ensemble.n,
                pump_photons,
                r_tilde_grid: ensemble.r_tilde_grid.clone(),
                snapshot_stride: None,
            };
            let run = run_quantum_pump(&model, cfg)?;
            Ok(MemberOutcome {
                pump_photons,
                weight,
                signal: run
                    .result
                    .trace(TRACE_SIGNAL)
                    .expect("pump runs always trace n_a")
                    .to_vec(),
                norm_error: run.result.norm_error_trace.clone(),
                leakage: run.result.leakage_trace.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut signal = vec![0.0f64; points];
    let mut signal_even = vec![0.0f64; points];
    let mut signal_odd = vec![0.0f64; points];
    let mut norm_error = vec![0.0f64; points];
    let mut leakage = vec![0.0f64; points];
    let mut even_weight = 0.0;
    let mut odd_weight = 0.0;
    for outcome in &outcomes {
        let parity = Parity::of_pump(outcome.pump_photons);
        match parity {
            Parity::Even => even_weight += outcome.weight,
            Parity::Odd => odd_weight += outcome.weight,
        }
        for i in 0..points {
            let contribution = outcome.weight * outcome.signal[i];
            signal[i] += contribution;
            match parity {
                Parity::Even => signal_even[i] += contribution,
                Parity::Odd => signal_odd[i] += contribution,
            }
            norm_error[i] = norm_error[i].max(outcome.norm_error[i]);
            leakage[i] += outcome.weight * outcome.leakage[i];
        }
    }

    let norm_drift = norm_error.iter().fold(0.0f64, |m, x| m.max(*x));
    let mut observable_traces = std::collections::BTreeMap::new();
    observable_traces.insert(TRACE_SIGNAL.to_string(), signal);
    observable_traces.insert(TRACE_SIGNAL_EVEN.to_string(), signal_even);
    observable_traces.insert(TRACE_SIGNAL_ODD.to_string(), signal_odd);
    let result = EvolutionResult {
        r_grid: ensemble.r_tilde_grid.clone(),
        observable_traces,
        norm_error_trace: norm_error,
        norm_drift,
        leakage_trace: leakage,
        snapshots: Vec::new(),
    };
    Ok(EnsembleRun {
        result,
        members,
        retained_mass: outcomes.iter().map(|o| o.weight).sum(),
        even_weight,
        odd_weight,
    })
}
