//! Propagation of states under `U(r) = exp(−i r H)` with interchangeable
//! methods and built-in diagnostics.
//!
//! Three independent propagators are kept on purpose: questions about
//! truncated squeezing dynamics hinge on numerical artifacts, so cross-method
//! agreement is a first-class requirement rather than an optimization.
//! [`evolve_spectral`] diagonalizes once and evaluates every grid point
//! exactly; [`evolve_krylov`] takes adaptive Lanczos substeps and scales to
//! large truncations; [`evolve_reference`] is a high-order adaptive
//! integrator used as an independent oracle in tests.

mod krylov;
mod reference;
mod spectral;

pub use krylov::evolve_krylov;
pub use reference::evolve_reference;
pub use spectral::evolve_spectral;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{self, Generator, StateVector};

/// Default target accuracy.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
/// Loosest accepted tolerance.
pub const MAX_TOLERANCE: f64 = 1e-4;
/// Default Krylov subspace cap per substep.
pub const DEFAULT_KRYLOV_MAX_DIM: usize = 48;
/// Smallest accepted Krylov subspace cap.
pub const MIN_KRYLOV_DIM: usize = 4;
/// Default cap on `|Δr|·‖H‖` per Krylov substep.
pub const DEFAULT_MAX_SUBSTEP: f64 = 25.0;

/// Propagation method selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// One eigendecomposition, exact evaluation at every grid point.
    Spectral,
    /// Adaptive Lanczos substepping; scales to large truncations.
    Krylov,
    /// Adaptive explicit integrator; test oracle for small systems.
    Reference,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Spectral => "spectral",
            Method::Krylov => "krylov",
            Method::Reference => "reference",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectral" => Ok(Method::Spectral),
            "krylov" => Ok(Method::Krylov),
            "reference" => Ok(Method::Reference),
            other => Err(Error::Domain(format!(
                "unknown method {other:?}, expected spectral, krylov, or reference"
            ))),
        }
    }
}

/// Propagator settings shared by all methods.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagatorConfig {
    pub method: Method,
    /// Dimensionless target accuracy, in `(0, 1e-4]`.
    pub tolerance: f64,
    /// Krylov subspace cap per substep, at least [`MIN_KRYLOV_DIM`].
    pub krylov_max_dim: usize,
    /// Cap on `|Δr|·‖H‖` (Gershgorin estimate) per Krylov substep.
    pub max_substep: f64,
}

impl Default for PropagatorConfig {
    fn default() -> Self {
        Self {
            method: Method::Spectral,
            tolerance: DEFAULT_TOLERANCE,
            krylov_max_dim: DEFAULT_KRYLOV_MAX_DIM,
            max_substep: DEFAULT_MAX_SUBSTEP,
        }
    }
}

impl PropagatorConfig {
    pub fn spectral() -> Self {
        Self::default()
    }

    pub fn krylov() -> Self {
        Self {
            method: Method::Krylov,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance <= MAX_TOLERANCE) {
            return Err(Error::Domain(format!(
                "tolerance {} outside (0, {MAX_TOLERANCE:.0e}]",
                self.tolerance
            )));
        }
        if self.krylov_max_dim < MIN_KRYLOV_DIM {
            return Err(Error::Domain(format!(
                "krylov_max_dim {} below minimum {MIN_KRYLOV_DIM}",
                self.krylov_max_dim
            )));
        }
        if !(self.max_substep > 0.0 && self.max_substep.is_finite()) {
            return Err(Error::Domain(format!(
                "max_substep {} must be a positive finite number",
                self.max_substep
            )));
        }
        Ok(())
    }
}

/// A named diagonal observable over the propagation basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    pub name: String,
    pub weights: Vec<f64>,
}

impl Observable {
    pub fn new(name: impl Into<String>, weights: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            weights,
        }
    }
}

/// What to record along an evolution.
#[derive(Debug, Clone, Default)]
pub struct TraceRequest {
    pub observables: Vec<Observable>,
    /// `Some(s)`: store a state snapshot at every s-th grid index.
    pub snapshot_stride: Option<usize>,
    /// Tail size for the leakage diagnostic; default `max(2, dim/20)`.
    pub leakage_tail: Option<usize>,
}

impl TraceRequest {
    pub fn observables(observables: Vec<Observable>) -> Self {
        Self {
            observables,
            ..Self::default()
        }
    }

    pub fn with_snapshots(mut self, stride: usize) -> Self {
        self.snapshot_stride = Some(stride);
        self
    }

    pub fn with_leakage_tail(mut self, tail: usize) -> Self {
        self.leakage_tail = Some(tail);
        self
    }
}

/// A stored state, unit-normalized, tagged with its grid position.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub index: usize,
    pub r: f64,
    pub state: StateVector,
}

/// Observable traces over a squeezing-parameter grid plus diagnostics.
#[derive(Debug, Clone)]
pub struct EvolutionResult {
    pub r_grid: Vec<f64>,
    pub observable_traces: BTreeMap<String, Vec<f64>>,
    /// Per-point `|‖ψ‖ − 1|`.
    pub norm_error_trace: Vec<f64>,
    /// `max |‖ψ‖ − 1|` over the grid.
    pub norm_drift: f64,
    /// Population of the top tail entries per grid point.
    pub leakage_trace: Vec<f64>,
    pub snapshots: Vec<Snapshot>,
}

impl EvolutionResult {
    /// Number of grid points.
    pub fn len(&self) -> usize {
        self.r_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r_grid.is_empty()
    }

    /// Trace of a named observable, if recorded.
    pub fn trace(&self, name: &str) -> Option<&[f64]> {
        self.observable_traces.get(name).map(Vec::as_slice)
    }

    /// Maximum leakage over the grid.
    pub fn max_leakage(&self) -> f64 {
        self.leakage_trace.iter().fold(0.0f64, |m, x| m.max(*x))
    }
}

/// Population in the top `tail_count` basis entries of `psi`.
pub fn leakage(psi: &StateVector, tail_count: usize) -> Result<f64> {
    let dim = psi.dim();
    if tail_count < 1 || tail_count >= dim {
        return Err(Error::Domain(format!(
            "leakage tail {tail_count} outside [1, {dim})"
        )));
    }
    Ok(tail_population(psi.amplitudes(), tail_count))
}

/// Default leakage tail window: `max(2, ⌊dim/20⌋)`, clamped inside the basis.
pub fn default_leakage_tail(dim: usize) -> usize {
    if dim < 2 {
        return 0;
    }
    (dim / 20).max(2).min(dim - 1)
}

fn tail_population(amplitudes: &[Complex64], tail_count: usize) -> f64 {
    amplitudes[amplitudes.len() - tail_count..]
        .iter()
        .map(|a| a.norm_sqr())
        .sum()
}

/// Evolve with the method selected in `cfg`.
pub fn evolve(
    gen: &Generator,
    psi0: &StateVector,
    r_grid: &[f64],
    request: &TraceRequest,
    cfg: &PropagatorConfig,
) -> Result<EvolutionResult> {
    cfg.validate()?;
    match cfg.method {
        Method::Spectral => evolve_spectral(gen, psi0, r_grid, request),
        Method::Krylov => evolve_krylov(gen, psi0, r_grid, request, cfg),
        Method::Reference => evolve_reference(gen, psi0, r_grid, request),
    }
}

/// Accumulates traces, diagnostics, and snapshots as grid points complete.
///
/// Points may arrive in any order (methods walk the two sign branches of the
/// grid separately); storage is indexed by grid position so results are
/// independent of traversal order.
pub(crate) struct Recorder {
    dim: usize,
    r_grid: Vec<f64>,
    observables: Vec<Observable>,
    snapshot_stride: Option<usize>,
    leakage_tail: usize,
    traces: Vec<Vec<f64>>,
    norm_error: Vec<f64>,
    leak: Vec<f64>,
    snapshots: Vec<Snapshot>,
    probs: Vec<f64>,
}

impl Recorder {
    /// Validate inputs and set up storage.
    pub(crate) fn new(
        gen: &Generator,
        psi0: &StateVector,
        r_grid: &[f64],
        request: &TraceRequest,
    ) -> Result<Self> {
        let dim = gen.dim();
        if psi0.dim() != dim {
            return Err(Error::Domain(format!(
                "state dimension {} does not match generator dimension {dim}",
                psi0.dim()
            )));
        }
        if r_grid.iter().any(|r| !r.is_finite()) {
            return Err(Error::Domain("r grid entries must be finite".into()));
        }
        if r_grid.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Domain("r grid must be sorted ascending".into()));
        }
        let mut names = std::collections::BTreeSet::new();
        for obs in &request.observables {
            if obs.weights.len() != dim {
                return Err(Error::Domain(format!(
                    "observable {:?} has {} weights for dimension {dim}",
                    obs.name,
                    obs.weights.len()
                )));
            }
            if !names.insert(obs.name.clone()) {
                return Err(Error::Domain(format!(
                    "duplicate observable name {:?}",
                    obs.name
                )));
            }
        }
        if request.snapshot_stride == Some(0) {
            return Err(Error::Domain("snapshot stride must be >= 1".into()));
        }
        let leakage_tail = match request.leakage_tail {
            Some(q) => {
                if q < 1 || q >= dim {
                    return Err(Error::Domain(format!(
                        "leakage tail {q} outside [1, {dim})"
                    )));
                }
                q
            }
            None => default_leakage_tail(dim),
        };
        let points = r_grid.len();
        Ok(Self {
            dim,
            r_grid: r_grid.to_vec(),
            observables: request.observables.clone(),
            snapshot_stride: request.snapshot_stride,
            leakage_tail,
            traces: vec![vec![0.0; points]; request.observables.len()],
            norm_error: vec![0.0; points],
            leak: vec![0.0; points],
            snapshots: Vec::new(),
            probs: vec![0.0; dim],
        })
    }

    pub(crate) fn grid(&self) -> &[f64] {
        &self.r_grid
    }

    /// Record the state reached at grid position `index`.
    pub(crate) fn record(&mut self, index: usize, amplitudes: &[Complex64]) -> Result<()> {
        debug_assert_eq!(amplitudes.len(), self.dim);
        let mut norm_sq = 0.0;
        for (p, a) in self.probs.iter_mut().zip(amplitudes) {
            *p = a.norm_sqr();
            norm_sq += *p;
        }
        self.norm_error[index] = (norm_sq.sqrt() - 1.0).abs();
        if self.leakage_tail > 0 {
            self.leak[index] = self.probs[self.dim - self.leakage_tail..].iter().sum();
        }
        for (trace, obs) in self.traces.iter_mut().zip(&self.observables) {
            trace[index] = self
                .probs
                .iter()
                .zip(&obs.weights)
                .map(|(p, w)| p * w)
                .sum();
        }
        if let Some(stride) = self.snapshot_stride {
            if index.is_multiple_of(stride) {
                self.snapshots.push(Snapshot {
                    index,
                    r: self.r_grid[index],
                    state: StateVector::normalized(amplitudes.to_vec())?,
                });
            }
        }
        Ok(())
    }

    pub(crate) fn finish(mut self) -> EvolutionResult {
        self.snapshots.sort_by_key(|s| s.index);
        let norm_drift = self.norm_error.iter().fold(0.0f64, |m, x| m.max(*x));
        let observable_traces = self
            .observables
            .into_iter()
            .zip(self.traces)
            .map(|(obs, trace)| (obs.name, trace))
            .collect();
        EvolutionResult {
            r_grid: self.r_grid,
            observable_traces,
            norm_error_trace: self.norm_error,
            norm_drift,
            leakage_trace: self.leak,
            snapshots: self.snapshots,
        }
    }
}

/// Split grid indices into a negative branch (walked outward from 0) and a
/// non-negative branch, both starting nearest the origin.
pub(crate) fn split_grid(r_grid: &[f64]) -> (Vec<usize>, Vec<usize>) {
    let first_nonneg = r_grid.partition_point(|r| *r < 0.0);
    let negative = (0..first_nonneg).rev().collect();
    let nonnegative = (first_nonneg..r_grid.len()).collect();
    (negative, nonnegative)
}

pub(crate) fn complex_norm(v: &[Complex64]) -> f64 {
    fock::norm(v)
}
