//! Quantitative studies: spectra, parity divergence, oscillation detection,
//! Kerr-regularization convergence, and signal-photon scaling fits.
//!
//! Scans dispatch their member runs concurrently but reduce in input order,
//! so every report is deterministic. Decision thresholds the literature
//! leaves qualitative ("drastic" divergence, "roughly" square-root scaling)
//! are named constants surfaced in the reports.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{build_classical_generator, build_sector_basis, Generator};
use crate::models::{
    pump_grid_for_effective, run_classical, run_quantum_pump, ClassicalPumpModel,
    QuantumPumpModel, SizeSpec, TRACE_SIGNAL,
};
use crate::propagate::PropagatorConfig;
use crate::tridiag;

/// Ratio above which a parity scan counts as drastically divergent.
pub const PARITY_RATIO_THRESHOLD: f64 = 10.0;
/// Floor guarding the parity ratio against division by zero.
pub const DELTA_FLOOR: f64 = 1e-14;
/// Wiggles below this absolute size are not counted as extrema.
pub const OSCILLATION_NOISE_GUARD: f64 = 1e-9;
/// Default relative drop certifying non-monotonic dynamics.
pub const OSCILLATION_DROP_THRESHOLD: f64 = 0.1;
/// Default adjacent-size agreement declaring Kerr-regularized convergence.
pub const KERR_CONVERGENCE_TOL: f64 = 1e-6;
/// Largest generator dimension [`spectrum`] will solve densely.
pub const SPECTRUM_DENSE_CAP: usize = 8192;
/// How many low-lying eigenvalues extension tables keep per size.
pub const EXTENSION_EIGENVALUE_COUNT: usize = 20;

/// Max-abs difference of two traces, normalized by `1 +` the larger
/// max-abs trace magnitude so regimes with very different scales compare.
pub fn normalized_deviation(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut diff = 0.0f64;
    let mut magnitude = 0.0f64;
    for (x, y) in a.iter().zip(b) {
        diff = diff.max((x - y).abs());
        magnitude = magnitude.max(x.abs()).max(y.abs());
    }
    diff / (1.0 + magnitude)
}

/// Sorted spectrum of a generator with pairing diagnostics.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Real eigenvalues, ascending.
    pub values: Vec<f64>,
    /// For zero-diagonal generators, `max |λ_j + λ_{dim−1−j}|`.
    pub pairing_defect: Option<f64>,
    /// Smallest eigenvalue magnitude (zero-mode indicator).
    pub min_abs: f64,
}

impl Spectrum {
    pub fn has_zero_mode(&self, tol: f64) -> bool {
        self.min_abs <= tol
    }

    /// Nonnegative eigenvalues, ascending.
    pub fn nonnegative(&self) -> Vec<f64> {
        self.values.iter().copied().filter(|v| *v >= 0.0).collect()
    }
}

/// Eigenvalues of `H`, via the similarity to a real symmetric tridiagonal.
pub fn spectrum(gen: &Generator) -> Result<Spectrum> {
    if gen.dim() > SPECTRUM_DENSE_CAP {
        return Err(Error::Domain(format!(
            "spectrum is limited to dim <= {SPECTRUM_DENSE_CAP}, got {}",
            gen.dim()
        )));
    }
    let values = tridiag::eigenvalues(gen.diagonal(), gen.band())?;
    let pairing_defect = gen.is_zero_diagonal().then(|| {
        let dim = values.len();
        (0..dim).fold(0.0f64, |m, j| m.max((values[j] + values[dim - 1 - j]).abs()))
    });
    let min_abs = values.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    Ok(Spectrum {
        values,
        pairing_defect,
        min_abs,
    })
}

/// Which model family a parity scan sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParityFamily {
    /// Classical pump at varying sector size.
    Classical { n: u32, chi: f64 },
    /// Quantum pump at varying initial pump photon number, compared on the
    /// common effective axis `r = r̃√N`.
    Pump { n: u32 },
}

/// Divergence metrics over a size sweep.
#[derive(Debug, Clone)]
pub struct ParityReport {
    /// Sizes examined, ascending.
    pub sizes: Vec<usize>,
    /// Max normalized gap across all same-parity size pairs.
    pub delta_same_parity: f64,
    /// Max normalized gap across consecutive sizes.
    pub delta_adjacent: f64,
    /// `delta_adjacent / max(delta_same_parity, floor)`.
    pub ratio: f64,
    /// The decision threshold the ratio is judged against.
    pub threshold: f64,
}

impl ParityReport {
    /// Does the sweep diverge drastically between parities?
    pub fn is_drastic(&self) -> bool {
        self.ratio > self.threshold
    }
}

fn sorted_unique(sizes: &[usize]) -> Vec<usize> {
    let mut out = sizes.to_vec();
    out.sort_unstable();
    out.dedup();
    out
}

fn check_parity_sweep(sizes: &[usize]) -> Result<()> {
    if sizes.len() < 4 {
        return Err(Error::Domain(format!(
            "parity scan needs at least 4 distinct sizes, got {}",
            sizes.len()
        )));
    }
    let evens = sizes.iter().filter(|s| *s % 2 == 0).count();
    if evens == 0 || evens == sizes.len() {
        return Err(Error::Domain(
            "parity scan needs sizes of both parities".into(),
        ));
    }
    Ok(())
}

fn check_traces(sizes: &[usize], traces: &[Vec<f64>]) -> Result<()> {
    if traces.len() != sizes.len() {
        return Err(Error::Domain(format!(
            "got {} traces for {} sizes",
            traces.len(),
            sizes.len()
        )));
    }
    if traces.windows(2).any(|w| w[0].len() != w[1].len()) {
        return Err(Error::Domain("traces have mismatched lengths".into()));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain(
            "sizes must be strictly ascending to pair with traces".into(),
        ));
    }
    Ok(())
}

/// Assemble the parity metrics from per-size traces (sorted by size).
fn parity_metrics(sizes: &[usize], traces: &[Vec<f64>]) -> (f64, f64) {
    let mut delta_same = 0.0f64;
    let mut delta_adjacent = 0.0f64;
    for i in 0..sizes.len() {
        for j in i + 1..sizes.len() {
            let delta = normalized_deviation(&traces[i], &traces[j]);
            if (sizes[i] % 2) == (sizes[j] % 2) {
                delta_same = delta_same.max(delta);
            }
            if j == i + 1 {
                delta_adjacent = delta_adjacent.max(delta);
            }
        }
    }
    (delta_same, delta_adjacent)
}

/// Parity metrics for precomputed traces, one per size, ascending sizes.
pub fn parity_report(sizes: &[usize], traces: &[Vec<f64>]) -> Result<ParityReport> {
    check_parity_sweep(sizes)?;
    check_traces(sizes, traces)?;
    let (delta_same_parity, delta_adjacent) = parity_metrics(sizes, traces);
    Ok(ParityReport {
        sizes: sizes.to_vec(),
        delta_same_parity,
        delta_adjacent,
        ratio: delta_adjacent / delta_same_parity.max(DELTA_FLOOR),
        threshold: PARITY_RATIO_THRESHOLD,
    })
}

/// Signal-photon traces of the classical family at each size (ascending).
fn classical_traces(
    n: u32,
    chi: f64,
    sizes: &[usize],
    r_grid: &[f64],
    cfg: &PropagatorConfig,
) -> Result<Vec<Vec<f64>>> {
    sizes
        .par_iter()
        .map(|&m| {
            let model = ClassicalPumpModel {
                snapshot_stride: None,
                ..ClassicalPumpModel::new(n, SizeSpec::Sector(m)).with_chi(chi)
            };
            let run = run_classical(&model, r_grid, cfg)?;
            Ok(run
                .result
                .trace(TRACE_SIGNAL)
                .expect("classical runs always trace n_a")
                .to_vec())
        })
        .collect()
}

/// Signal-photon traces of the pump family on the effective axis `r_grid`.
fn pump_traces(
    n: u32,
    pump_values: &[usize],
    r_grid: &[f64],
    cfg: &PropagatorConfig,
) -> Result<Vec<Vec<f64>>> {
    pump_values
        .par_iter()
        .map(|&big_n| {
            let model = QuantumPumpModel {
                snapshot_stride: None,
                ..QuantumPumpModel::new(
                    n,
                    big_n as u64,
                    pump_grid_for_effective(r_grid, big_n as u64),
                )
            };
            let run = run_quantum_pump(&model, cfg)?;
            Ok(run
                .result
                .trace(TRACE_SIGNAL)
                .expect("pump runs always trace n_a")
                .to_vec())
        })
        .collect()
}

/// Run the family at each size and compare signal-photon traces.
///
/// For [`ParityFamily::Pump`] the sizes are initial pump photon numbers and
/// `r_grid` is the shared effective-parameter axis.
pub fn parity_scan(
    family: ParityFamily,
    sizes: &[usize],
    r_grid: &[f64],
    cfg: &PropagatorConfig,
) -> Result<ParityReport> {
    let sizes = sorted_unique(sizes);
    check_parity_sweep(&sizes)?;
    let traces = match family {
        ParityFamily::Classical { n, chi } => classical_traces(n, chi, &sizes, r_grid, cfg)?,
        ParityFamily::Pump { n } => pump_traces(n, &sizes, r_grid, cfg)?,
    };
    parity_report(&sizes, &traces)
}

/// Kind of a certified extremum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumKind {
    Maximum,
    Minimum,
}

/// A certified interior extremum of a trace.
#[derive(Debug, Clone, Copy)]
pub struct Extremum {
    pub index: usize,
    pub r: f64,
    pub value: f64,
    pub kind: ExtremumKind,
}

/// Evidence of non-monotonic dynamics in a trace.
#[derive(Debug, Clone)]
pub struct OscillationCertificate {
    /// Confirmed extrema in grid order, alternating maximum/minimum.
    pub extrema: Vec<Extremum>,
    /// Relative drop from the first maximum to the following valley, in
    /// `[0, 1]`; 0 when no maximum was certified.
    pub relative_drop: f64,
}

impl OscillationCertificate {
    /// No oscillation was detected.
    pub fn is_empty(&self) -> bool {
        self.extrema.is_empty()
    }

    /// First certified maximum, if any.
    pub fn first_maximum(&self) -> Option<&Extremum> {
        self.extrema
            .iter()
            .find(|e| e.kind == ExtremumKind::Maximum)
    }

    /// Non-monotonicity with at least the given relative drop.
    pub fn certifies(&self, min_drop: f64) -> bool {
        self.first_maximum().is_some() && self.relative_drop >= min_drop
    }
}

/// Find strict turning points of `trace` with a hysteresis noise guard.
pub fn detect_oscillation(r_grid: &[f64], trace: &[f64]) -> Result<OscillationCertificate> {
    if trace.len() != r_grid.len() {
        return Err(Error::Domain(format!(
            "trace length {} does not match grid length {}",
            trace.len(),
            r_grid.len()
        )));
    }
    if trace.len() < 5 {
        return Err(Error::Domain(format!(
            "oscillation detection needs at least 5 points, got {}",
            trace.len()
        )));
    }
    let guard = OSCILLATION_NOISE_GUARD;

    #[derive(Clone, Copy, PartialEq)]
    enum Dir {
        Unknown,
        Up,
        Down,
    }
    let mut extrema: Vec<Extremum> = Vec::new();
    let mut dir = Dir::Unknown;
    let mut running_max = (0usize, trace[0]);
    let mut running_min = (0usize, trace[0]);
    for (i, &x) in trace.iter().enumerate().skip(1) {
        if x > running_max.1 {
            running_max = (i, x);
        }
        if x < running_min.1 {
            running_min = (i, x);
        }
        match dir {
            Dir::Unknown => {
                if x >= running_min.1 + guard {
                    dir = Dir::Up;
                    running_max = (i, x);
                } else if x <= running_max.1 - guard {
                    dir = Dir::Down;
                    running_min = (i, x);
                }
            }
            Dir::Up => {
                if x <= running_max.1 - guard {
                    extrema.push(Extremum {
                        index: running_max.0,
                        r: r_grid[running_max.0],
                        value: running_max.1,
                        kind: ExtremumKind::Maximum,
                    });
                    dir = Dir::Down;
                    running_min = (i, x);
                }
            }
            Dir::Down => {
                if x >= running_min.1 + guard {
                    extrema.push(Extremum {
                        index: running_min.0,
                        r: r_grid[running_min.0],
                        value: running_min.1,
                        kind: ExtremumKind::Minimum,
                    });
                    dir = Dir::Up;
                    running_max = (i, x);
                }
            }
        }
    }

    let relative_drop = extrema
        .iter()
        .position(|e| e.kind == ExtremumKind::Maximum)
        .map_or(0.0, |pos| {
            let peak = extrema[pos];
            let after = &trace[peak.index + 1..];
            let valley = after.iter().fold(f64::INFINITY, |m, v| m.min(*v));
            if peak.value <= guard {
                0.0
            } else {
                ((peak.value - valley) / peak.value).clamp(0.0, 1.0)
            }
        });
    Ok(OscillationCertificate {
        extrema,
        relative_drop,
    })
}

/// Least-squares power law through `(x, y)` in log-log space.
#[derive(Debug, Clone, Copy)]
pub struct PowerLawFit {
    pub exponent: f64,
    /// Intercept in log space: `ln y ≈ exponent·ln x + log_intercept`.
    pub log_intercept: f64,
    /// RMS residual of `ln y` around the fit.
    pub residual_rms: f64,
}

/// Fit `y = c·x^p` by least squares on the logs.
pub fn power_law_fit(x: &[f64], y: &[f64]) -> Result<PowerLawFit> {
    if x.len() != y.len() {
        return Err(Error::Fit(format!(
            "x and y lengths differ: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::Fit(format!(
            "power-law fit needs at least 2 points, got {}",
            x.len()
        )));
    }
    if x.iter().chain(y).any(|v| !v.is_finite() || *v <= 0.0) {
        return Err(Error::Fit(
            "power-law fit needs strictly positive finite data".into(),
        ));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let count = lx.len() as f64;
    let mean_x = lx.iter().sum::<f64>() / count;
    let mean_y = ly.iter().sum::<f64>() / count;
    let var_x: f64 = lx.iter().map(|v| (v - mean_x).powi(2)).sum();
    let var_y: f64 = ly.iter().map(|v| (v - mean_y).powi(2)).sum();
    if var_x == 0.0 {
        return Err(Error::Fit("all x values coincide".into()));
    }
    if var_y == 0.0 {
        return Err(Error::Fit("response data is constant".into()));
    }
    let cov: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(a, b)| (a - mean_x) * (b - mean_y))
        .sum();
    let exponent = cov / var_x;
    let log_intercept = mean_y - exponent * mean_x;
    let residual_rms = (lx
        .iter()
        .zip(&ly)
        .map(|(a, b)| (b - (exponent * a + log_intercept)).powi(2))
        .sum::<f64>()
        / count)
        .sqrt();
    Ok(PowerLawFit {
        exponent,
        log_intercept,
        residual_rms,
    })
}

/// Effective-parameter window over which scaling responses are measured.
#[derive(Debug, Clone, Copy)]
pub struct ScalingWindow {
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
}

impl Default for ScalingWindow {
    fn default() -> Self {
        Self {
            r_min: 0.0,
            r_max: 3.0,
            points: 301,
        }
    }
}

/// Signal-photon scaling with pump photon number, both response definitions.
#[derive(Debug, Clone)]
pub struct ScalingFit {
    /// Pump photon numbers, ascending, single parity class.
    pub pump_values: Vec<u64>,
    /// Peak `⟨n_a⟩` over the window, per pump value.
    pub peak_response: Vec<f64>,
    /// Grid-mean `⟨n_a⟩` over the window, per pump value.
    pub mean_response: Vec<f64>,
    pub peak_fit: PowerLawFit,
    pub mean_fit: PowerLawFit,
}

/// Fit how the signal-photon response scales with `N` over a fixed
/// effective-parameter window.
///
/// Even and odd pump numbers converge to different dynamics, so a fit mixes
/// them only at the cost of conflating two limits; a single parity class is
/// required.
pub fn fit_scaling(
    n: u32,
    pump_values: &[u64],
    window: &ScalingWindow,
    cfg: &PropagatorConfig,
) -> Result<ScalingFit> {
    let mut pump_values = pump_values.to_vec();
    pump_values.sort_unstable();
    pump_values.dedup();
    check_scaling_values(&pump_values)?;
    let r_grid = crate::models::linear_grid(window.r_min, window.r_max, window.points)?;

    let responses: Vec<(f64, f64)> = pump_values
        .par_iter()
        .map(|&big_n| scaling_response(n, big_n, &r_grid, cfg))
        .collect::<Result<Vec<_>>>()?;

    let peak_response: Vec<f64> = responses.iter().map(|(p, _)| *p).collect();
    let mean_response: Vec<f64> = responses.iter().map(|(_, m)| *m).collect();
    scaling_report(&pump_values, &peak_response, &mean_response)
}

fn check_scaling_values(pump_values: &[u64]) -> Result<()> {
    if pump_values.len() < 6 {
        return Err(Error::Domain(format!(
            "scaling fit needs at least 6 distinct pump values, got {}",
            pump_values.len()
        )));
    }
    if pump_values.iter().any(|v| *v < 1) {
        return Err(Error::Domain("pump values must be >= 1".into()));
    }
    if pump_values.windows(2).any(|w| w[0] % 2 != w[1] % 2) {
        return Err(Error::Domain(
            "scaling fit mixes parity classes; fit even and odd separately".into(),
        ));
    }
    Ok(())
}

/// Peak and grid-mean signal response of one pump member on the effective
/// window `r_grid`.
pub fn scaling_response(
    n: u32,
    pump_photons: u64,
    r_grid: &[f64],
    cfg: &PropagatorConfig,
) -> Result<(f64, f64)> {
    let model = QuantumPumpModel {
        snapshot_stride: None,
        ..QuantumPumpModel::new(n, pump_photons, pump_grid_for_effective(r_grid, pump_photons))
    };
    let run = run_quantum_pump(&model, cfg)?;
    let trace = run
        .result
        .trace(TRACE_SIGNAL)
        .expect("pump runs always trace n_a");
    let peak = trace.iter().fold(0.0f64, |m, v| m.max(*v));
    let mean = trace.iter().sum::<f64>() / trace.len() as f64;
    Ok((peak, mean))
}

/// Fit precomputed responses; `pump_values` ascending, single parity.
pub fn scaling_report(
    pump_values: &[u64],
    peak_response: &[f64],
    mean_response: &[f64],
) -> Result<ScalingFit> {
    check_scaling_values(pump_values)?;
    if peak_response.len() != pump_values.len() || mean_response.len() != pump_values.len() {
        return Err(Error::Domain(
            "response lengths do not match pump values".into(),
        ));
    }
    let x: Vec<f64> = pump_values.iter().map(|v| *v as f64).collect();
    let peak_fit = power_law_fit(&x, peak_response)?;
    let mean_fit = power_law_fit(&x, mean_response)?;
    Ok(ScalingFit {
        pump_values: pump_values.to_vec(),
        peak_response: peak_response.to_vec(),
        mean_response: mean_response.to_vec(),
        peak_fit,
        mean_fit,
    })
}

/// Convergence of the Kerr-regularized classical model across sizes.
#[derive(Debug, Clone)]
pub struct KerrConvergenceReport {
    /// Parity metrics over the same sweep.
    pub parity: ParityReport,
    /// Normalized gap per consecutive size pair, in size order.
    pub adjacent_deltas: Vec<f64>,
    /// Smallest size from which every later adjacent gap is below
    /// the tolerance; `None` when the sweep never settles.
    pub converged_from: Option<usize>,
    pub tolerance: f64,
}

/// Sweep sizes of the Kerr-regularized model and locate where adjacent
/// sizes stop disagreeing.
pub fn kerr_convergence(
    n: u32,
    chi: f64,
    sizes: &[usize],
    r_grid: &[f64],
    tolerance: f64,
    cfg: &PropagatorConfig,
) -> Result<KerrConvergenceReport> {
    if chi == 0.0 || !chi.is_finite() {
        return Err(Error::Domain(format!(
            "Kerr convergence needs a nonzero finite chi, got {chi}"
        )));
    }
    if !tolerance.is_finite() || tolerance <= 0.0 {
        return Err(Error::Domain(format!(
            "convergence tolerance must be positive, got {tolerance}"
        )));
    }
    let sizes = sorted_unique(sizes);
    check_parity_sweep(&sizes)?;
    let traces = classical_traces(n, chi, &sizes, r_grid, cfg)?;
    kerr_report(&sizes, &traces, tolerance)
}

/// Convergence metrics for precomputed Kerr-regularized traces.
pub fn kerr_report(
    sizes: &[usize],
    traces: &[Vec<f64>],
    tolerance: f64,
) -> Result<KerrConvergenceReport> {
    if !tolerance.is_finite() || tolerance <= 0.0 {
        return Err(Error::Domain(format!(
            "convergence tolerance must be positive, got {tolerance}"
        )));
    }
    let parity = parity_report(sizes, traces)?;
    let adjacent_deltas: Vec<f64> = traces
        .windows(2)
        .map(|w| normalized_deviation(&w[0], &w[1]))
        .collect();
    // Largest suffix of pairs all below tolerance; its first size is the
    // empirical convergence threshold.
    let mut start = adjacent_deltas.len();
    while start > 0 && adjacent_deltas[start - 1] < tolerance {
        start -= 1;
    }
    let converged_from = (start < adjacent_deltas.len()).then(|| sizes[start]);
    Ok(KerrConvergenceReport {
        parity,
        adjacent_deltas,
        converged_from,
        tolerance,
    })
}

/// Low-lying spectra of one parity class across a size sequence.
#[derive(Debug, Clone)]
pub struct ExtensionTable {
    /// Sizes, ascending, all of one parity.
    pub sizes: Vec<usize>,
    /// Per size: the lowest nonnegative eigenvalues, ascending.
    pub eigenvalues: Vec<Vec<f64>>,
    /// Per successive size pair: `|λ_j(next) − λ_j(prev)|` by index.
    pub gaps: Vec<Vec<f64>>,
}

impl ExtensionTable {
    /// Eigenvalues at the largest size.
    pub fn final_values(&self) -> &[f64] {
        self.eigenvalues.last().expect("table has >= 4 sizes")
    }

    /// Largest per-index gap between the two largest sizes.
    pub fn final_intra_gap(&self) -> f64 {
        self.gaps
            .last()
            .expect("table has >= 4 sizes")
            .iter()
            .fold(0.0f64, |m, g| m.max(*g))
    }
}

/// Track the lowest `count` nonnegative eigenvalues of the classical
/// generator over a single-parity size sequence.
pub fn extension_convergence(n: u32, sizes: &[usize], count: usize) -> Result<ExtensionTable> {
    let sizes = sorted_unique(sizes);
    if sizes.len() < 4 {
        return Err(Error::Domain(format!(
            "extension table needs at least 4 sizes, got {}",
            sizes.len()
        )));
    }
    if sizes.windows(2).any(|w| w[0] % 2 != w[1] % 2) {
        return Err(Error::Domain(
            "extension table mixes parity classes".into(),
        ));
    }
    if count < 1 {
        return Err(Error::Domain("eigenvalue count must be >= 1".into()));
    }
    let eigenvalues: Vec<Vec<f64>> = sizes
        .par_iter()
        .map(|&m| -> Result<Vec<f64>> {
            let basis = build_sector_basis(n, 0, m)?;
            let gen = build_classical_generator(&basis)?;
            let spec = spectrum(&gen)?;
            let mut low = spec.nonnegative();
            low.truncate(count);
            Ok(low)
        })
        .collect::<Result<Vec<_>>>()?;
    let gaps = eigenvalues
        .windows(2)
        .map(|w| {
            w[0].iter()
                .zip(&w[1])
                .map(|(a, b)| (a - b).abs())
                .collect()
        })
        .collect();
    Ok(ExtensionTable {
        sizes,
        eigenvalues,
        gaps,
    })
}

/// Max matched-index distance between two ascending eigenvalue lists.
pub fn matched_eigenvalue_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

/// Smallest distance between any pair drawn from the two lists.
pub fn nearest_eigenvalue_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut best = f64::INFINITY;
    for x in a {
        for y in b {
            best = best.min((x - y).abs());
        }
    }
    best
}
