//! Experiment execution and artifact persistence.
//!
//! Sweep members run concurrently inside a dedicated worker pool; all
//! reductions and file emission happen in config order on one thread, so
//! CSV outputs are byte-identical across runs and worker counts. A failed
//! member does not abort the sweep: its error lands in the run record,
//! the record is marked degraded, and surviving outputs are still written.

use std::fs;
use std::path::Path;

use chrono::{SecondsFormat, Utc};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::{Experiment, ExperimentConfig, SweepFamily};
use crate::analysis::{self, KerrConvergenceReport, ParityReport};
use crate::error::{Error, Result};
use crate::models::{
    pump_grid_for_effective, run_classical, run_coherent_ensemble, run_quantum_pump,
    ClassicalPumpModel, CoherentPumpEnsemble, QuantumPumpModel, SizeSpec, LEAKAGE_WARN_THRESHOLD,
    TRACE_PUMP, TRACE_SIGNAL, TRACE_SIGNAL_EVEN, TRACE_SIGNAL_ODD,
};

/// Provenance file emitted alongside every run.
pub const RUN_RECORD_FILE: &str = "run_record.json";

/// Eigenvalue magnitudes below this count as a zero mode in reports.
const ZERO_MODE_TOL: f64 = 1e-9;

/// One emitted file and its content digest.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub path: String,
    pub sha256: String,
}

/// Numerical health of a run plus any per-job failures.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Diagnostics {
    pub norm_drift_max: Option<f64>,
    pub leakage_max: Option<f64>,
    pub warnings: Vec<String>,
    pub job_errors: Vec<String>,
}

/// Persisted provenance of one experiment run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub artifact_version: String,
    pub experiment: String,
    /// `"ok"` or `"degraded"` (some sweep members failed).
    pub status: String,
    pub started_at: String,
    pub finished_at: String,
    /// Effective config; parses back to the identical experiment.
    pub config: Value,
    pub diagnostics: Diagnostics,
    /// Every emitted data file with its SHA-256 digest.
    pub outputs: Vec<ManifestEntry>,
}

impl RunRecord {
    /// Whether the run completed without job failures.
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

struct Outcome {
    files: Vec<(String, Vec<u8>)>,
    diagnostics: Diagnostics,
    degraded: bool,
}

impl Outcome {
    fn failed(label: &str, e: &Error) -> Self {
        Self {
            files: Vec::new(),
            diagnostics: Diagnostics {
                job_errors: vec![format!("{label}: {e}")],
                ..Default::default()
            },
            degraded: true,
        }
    }
}

/// Run one experiment and persist its artifacts under `out_dir`.
///
/// Physics failures degrade the record instead of erroring; only I/O and
/// infrastructure problems surface as `Err`.
pub fn run_experiment(cfg: &ExperimentConfig, out_dir: &Path) -> Result<RunRecord> {
    let started_at = timestamp();
    fs::create_dir_all(out_dir)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.resolved_workers())
        .build()
        .map_err(|e| Error::Numerical(format!("worker pool: {e}")))?;
    let outcome = pool.install(|| execute(cfg));

    let mut outputs = Vec::with_capacity(outcome.files.len());
    for (name, bytes) in &outcome.files {
        fs::write(out_dir.join(name), bytes)?;
        outputs.push(ManifestEntry {
            path: name.clone(),
            sha256: hex::encode(Sha256::digest(bytes)),
        });
    }
    let record = RunRecord {
        artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        experiment: cfg.experiment.name().to_string(),
        status: if outcome.degraded { "degraded" } else { "ok" }.to_string(),
        started_at,
        finished_at: timestamp(),
        config: cfg.to_json(),
        diagnostics: outcome.diagnostics,
        outputs,
    };
    let mut record_bytes = serde_json::to_vec_pretty(&record)
        .map_err(|e| Error::Numerical(format!("record serialization: {e}")))?;
    record_bytes.push(b'\n');
    fs::write(out_dir.join(RUN_RECORD_FILE), record_bytes)?;
    Ok(record)
}

fn timestamp() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Micros, true)
}

fn execute(cfg: &ExperimentConfig) -> Outcome {
    match cfg.experiment {
        Experiment::Classical => classical_outcome(cfg),
        Experiment::Pump => pump_outcome(cfg),
        Experiment::Ensemble => ensemble_outcome(cfg),
        Experiment::Spectrum => spectrum_outcome(cfg),
        Experiment::ParityScan => parity_outcome(cfg),
        Experiment::Scaling => scaling_outcome(cfg),
        Experiment::KerrConvergence => kerr_outcome(cfg),
        Experiment::ExtensionConvergence => extension_outcome(cfg),
    }
}

/// 17-significant-digit float field.
fn fmt_f(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Vec<u8> {
    let mut s = String::with_capacity(rows.len() * 80 + 64);
    s.push_str(&header.join(","));
    s.push('\n');
    for row in rows {
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s.into_bytes()
}

fn json_bytes(value: &Value) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("reports serialize");
    bytes.push(b'\n');
    bytes
}

fn opt_json(v: Option<f64>) -> Value {
    v.map_or(Value::Null, |x| json!(x))
}

fn require_size(cfg: &ExperimentConfig) -> Result<SizeSpec> {
    cfg.size
        .ok_or_else(|| Error::Domain("config is missing a truncation size".into()))
}

// --- single-run experiments ---

fn classical_outcome(cfg: &ExperimentConfig) -> Outcome {
    let run = (|| {
        let grid = cfg.grid.build()?;
        let model = ClassicalPumpModel {
            snapshot_stride: None,
            ..ClassicalPumpModel::new(cfg.n, require_size(cfg)?).with_chi(cfg.chi)
        };
        run_classical(&model, &grid, &cfg.propagator)
    })();
    let run = match run {
        Ok(run) => run,
        Err(e) => return Outcome::failed("classical run", &e),
    };
    let res = &run.result;
    let n_a = res.trace(TRACE_SIGNAL).expect("classical runs trace n_a");
    let rows: Vec<Vec<String>> = (0..res.len())
        .map(|i| {
            vec![
                fmt_f(res.r_grid[i]),
                fmt_f(n_a[i]),
                fmt_f(res.leakage_trace[i]),
                fmt_f(res.norm_error_trace[i]),
            ]
        })
        .collect();
    let mut diagnostics = Diagnostics {
        norm_drift_max: Some(res.norm_drift),
        leakage_max: Some(res.max_leakage()),
        ..Default::default()
    };
    if run.leakage_warning {
        diagnostics.warnings.push(format!(
            "leakage exceeded {LEAKAGE_WARN_THRESHOLD:.0e}; the truncation boundary shapes \
             part of this trace"
        ));
    }
    Outcome {
        files: vec![(
            "classical_trace.csv".into(),
            csv_bytes(&["r", "n_a", "leakage", "norm_drift"], &rows),
        )],
        diagnostics,
        degraded: false,
    }
}

fn pump_outcome(cfg: &ExperimentConfig) -> Outcome {
    let run = (|| {
        let pump_photons = cfg
            .pump_photons
            .ok_or_else(|| Error::Domain("config is missing N".into()))?;
        let grid = cfg.grid.build()?;
        let model = QuantumPumpModel {
            snapshot_stride: None,
            ..QuantumPumpModel::new(cfg.n, pump_photons, grid)
        };
        run_quantum_pump(&model, &cfg.propagator)
    })();
    let run = match run {
        Ok(run) => run,
        Err(e) => return Outcome::failed("pump run", &e),
    };
    let res = &run.result;
    let n_a = res.trace(TRACE_SIGNAL).expect("pump runs trace n_a");
    let n_b = res.trace(TRACE_PUMP).expect("pump runs trace n_b");
    let rows: Vec<Vec<String>> = (0..res.len())
        .map(|i| {
            vec![
                fmt_f(res.r_grid[i]),
                fmt_f(n_a[i]),
                fmt_f(n_b[i]),
                fmt_f(res.norm_error_trace[i]),
            ]
        })
        .collect();
    Outcome {
        files: vec![(
            "pump_trace.csv".into(),
            csv_bytes(&["r_tilde", "n_a", "n_b", "norm_drift"], &rows),
        )],
        diagnostics: Diagnostics {
            norm_drift_max: Some(res.norm_drift),
            ..Default::default()
        },
        degraded: false,
    }
}

fn ensemble_outcome(cfg: &ExperimentConfig) -> Outcome {
    let run = (|| {
        let mean = cfg
            .mean_pump_photons
            .ok_or_else(|| Error::Domain("config is missing alpha_sq".into()))?;
        let grid = cfg.grid.build()?;
        let ensemble = CoherentPumpEnsemble {
            tail_epsilon: cfg.tail_epsilon,
            max_pump_photons: cfg.max_pump_photons,
            ..CoherentPumpEnsemble::new(cfg.n, mean, grid)
        };
        run_coherent_ensemble(&ensemble, &cfg.propagator)
    })();
    let run = match run {
        Ok(run) => run,
        Err(e) => return Outcome::failed("ensemble run", &e),
    };
    let res = &run.result;
    let n_a = res.trace(TRACE_SIGNAL).expect("ensembles trace n_a");
    let even = res.trace(TRACE_SIGNAL_EVEN).expect("ensembles trace n_a_even");
    let odd = res.trace(TRACE_SIGNAL_ODD).expect("ensembles trace n_a_odd");
    let rows: Vec<Vec<String>> = (0..res.len())
        .map(|i| {
            vec![
                fmt_f(res.r_grid[i]),
                fmt_f(n_a[i]),
                fmt_f(res.norm_error_trace[i]),
            ]
        })
        .collect();
    let report = json!({
        "alpha_sq": cfg.mean_pump_photons,
        "tail_epsilon": cfg.tail_epsilon,
        "window": {
            "n_min": run.members.first().map(|(n, _)| *n),
            "n_max": run.members.last().map(|(n, _)| *n),
        },
        "retained_mass": run.retained_mass,
        "even_weight": run.even_weight,
        "odd_weight": run.odd_weight,
        "members": run.members.iter()
            .map(|(n, w)| json!({"N": n, "weight": w}))
            .collect::<Vec<_>>(),
        "r_tilde": res.r_grid,
        "n_a_even": even,
        "n_a_odd": odd,
    });
    Outcome {
        files: vec![
            (
                "ensemble_trace.csv".into(),
                csv_bytes(&["r_tilde", "n_a", "norm_drift"], &rows),
            ),
            ("ensemble_report.json".into(), json_bytes(&report)),
        ],
        diagnostics: Diagnostics {
            norm_drift_max: Some(res.norm_drift),
            ..Default::default()
        },
        degraded: false,
    }
}

fn spectrum_outcome(cfg: &ExperimentConfig) -> Outcome {
    let built = (|| {
        let sector = require_size(cfg)?.sector_size(cfg.n)?;
        let basis = crate::fock::build_sector_basis(cfg.n, 0, sector)?;
        let mut gen = crate::fock::build_classical_generator(&basis)?;
        if cfg.chi != 0.0 {
            gen = gen.with_diagonal(crate::fock::build_kerr_diagonal(&basis, cfg.chi)?)?;
        }
        Ok((sector, analysis::spectrum(&gen)?))
    })();
    let (sector, spectrum) = match built {
        Ok(pair) => pair,
        Err(e) => return Outcome::failed("spectrum", &e),
    };
    let rows: Vec<Vec<String>> = spectrum
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| vec![sector.to_string(), j.to_string(), fmt_f(*v)])
        .collect();
    let report = json!({
        "size": sector,
        "chi": cfg.chi,
        "pairing_defect": opt_json(spectrum.pairing_defect),
        "min_abs_eigenvalue": spectrum.min_abs,
        "has_zero_mode": spectrum.has_zero_mode(ZERO_MODE_TOL),
    });
    Outcome {
        files: vec![
            (
                "spectrum.csv".into(),
                csv_bytes(&["size", "index", "lambda"], &rows),
            ),
            ("spectrum_report.json".into(), json_bytes(&report)),
        ],
        diagnostics: Diagnostics::default(),
        degraded: false,
    }
}

// --- sweep experiments ---

struct Member {
    size: usize,
    file: String,
    bytes: Vec<u8>,
    n_a: Vec<f64>,
    norm_drift: f64,
    leakage_max: Option<f64>,
    leakage_warning: bool,
}

fn classical_member(
    cfg: &ExperimentConfig,
    grid: &[f64],
    size: usize,
    prefix: &str,
) -> Result<Member> {
    let model = ClassicalPumpModel {
        snapshot_stride: None,
        ..ClassicalPumpModel::new(cfg.n, SizeSpec::Sector(size)).with_chi(cfg.chi)
    };
    let run = run_classical(&model, grid, &cfg.propagator)?;
    let res = run.result;
    let n_a = res
        .trace(TRACE_SIGNAL)
        .expect("classical runs trace n_a")
        .to_vec();
    let rows: Vec<Vec<String>> = (0..res.len())
        .map(|i| {
            vec![
                fmt_f(res.r_grid[i]),
                fmt_f(n_a[i]),
                fmt_f(res.leakage_trace[i]),
                fmt_f(res.norm_error_trace[i]),
            ]
        })
        .collect();
    Ok(Member {
        size,
        file: format!("{prefix}_m{size}.csv"),
        bytes: csv_bytes(&["r", "n_a", "leakage", "norm_drift"], &rows),
        n_a,
        norm_drift: res.norm_drift,
        leakage_max: Some(res.max_leakage()),
        leakage_warning: run.leakage_warning,
    })
}

fn pump_member(cfg: &ExperimentConfig, grid: &[f64], size: usize) -> Result<Member> {
    let model = QuantumPumpModel {
        snapshot_stride: None,
        ..QuantumPumpModel::new(cfg.n, size as u64, pump_grid_for_effective(grid, size as u64))
    };
    let run = run_quantum_pump(&model, &cfg.propagator)?;
    let res = run.result;
    let n_a = res
        .trace(TRACE_SIGNAL)
        .expect("pump runs trace n_a")
        .to_vec();
    let n_b = res.trace(TRACE_PUMP).expect("pump runs trace n_b");
    // Column 1 is the shared effective axis, so member files overlay.
    let rows: Vec<Vec<String>> = (0..res.len())
        .map(|i| {
            vec![
                fmt_f(grid[i]),
                fmt_f(n_a[i]),
                fmt_f(n_b[i]),
                fmt_f(res.norm_error_trace[i]),
            ]
        })
        .collect();
    Ok(Member {
        size,
        file: format!("parity_trace_N{size}.csv"),
        bytes: csv_bytes(&["r", "n_a", "n_b", "norm_drift"], &rows),
        n_a,
        norm_drift: res.norm_drift,
        leakage_max: None,
        leakage_warning: false,
    })
}

struct Sweep {
    files: Vec<(String, Vec<u8>)>,
    sizes: Vec<usize>,
    traces: Vec<Vec<f64>>,
    diagnostics: Diagnostics,
}

/// Run one member per size concurrently; fold results in size order.
fn run_sweep(
    sizes: &[usize],
    run_member: impl Fn(usize) -> Result<Member> + Sync,
) -> Sweep {
    let results: Vec<(usize, Result<Member>)> = sizes
        .par_iter()
        .map(|&size| (size, run_member(size)))
        .collect();
    let mut sweep = Sweep {
        files: Vec::new(),
        sizes: Vec::new(),
        traces: Vec::new(),
        diagnostics: Diagnostics::default(),
    };
    for (size, result) in results {
        match result {
            Ok(member) => {
                sweep.sizes.push(member.size);
                sweep.traces.push(member.n_a);
                sweep.files.push((member.file, member.bytes));
                let d = &mut sweep.diagnostics;
                d.norm_drift_max =
                    Some(d.norm_drift_max.unwrap_or(0.0).max(member.norm_drift));
                if let Some(leak) = member.leakage_max {
                    d.leakage_max = Some(d.leakage_max.unwrap_or(0.0).max(leak));
                }
                if member.leakage_warning {
                    d.warnings.push(format!(
                        "size {size}: leakage exceeded {LEAKAGE_WARN_THRESHOLD:.0e}"
                    ));
                }
            }
            Err(e) => sweep.diagnostics.job_errors.push(format!("size {size}: {e}")),
        }
    }
    sweep
}

fn parity_report_json(family: SweepFamily, report: &ParityReport) -> Value {
    json!({
        "family": family.name(),
        "sizes": report.sizes,
        "delta_same_parity": report.delta_same_parity,
        "delta_adjacent": report.delta_adjacent,
        "ratio": report.ratio,
        "threshold": report.threshold,
        "is_drastic": report.is_drastic(),
    })
}

fn sorted_sizes(raw: &[usize]) -> Vec<usize> {
    let mut sizes = raw.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    sizes
}

fn parity_outcome(cfg: &ExperimentConfig) -> Outcome {
    let grid = match cfg.grid.build() {
        Ok(grid) => grid,
        Err(e) => return Outcome::failed("grid", &e),
    };
    let sizes = sorted_sizes(&cfg.sizes);
    let mut sweep = match cfg.family {
        SweepFamily::Classical => run_sweep(&sizes, |size| {
            classical_member(cfg, &grid, size, "parity_trace")
        }),
        SweepFamily::Pump => run_sweep(&sizes, |size| pump_member(cfg, &grid, size)),
    };
    let mut degraded = !sweep.diagnostics.job_errors.is_empty();
    if !degraded {
        match analysis::parity_report(&sweep.sizes, &sweep.traces) {
            Ok(report) => sweep.files.push((
                "parity_report.json".into(),
                json_bytes(&parity_report_json(cfg.family, &report)),
            )),
            Err(e) => {
                sweep
                    .diagnostics
                    .job_errors
                    .push(format!("parity report: {e}"));
                degraded = true;
            }
        }
    }
    Outcome {
        files: sweep.files,
        diagnostics: sweep.diagnostics,
        degraded,
    }
}

fn kerr_report_json(cfg: &ExperimentConfig, report: &KerrConvergenceReport) -> Value {
    json!({
        "chi": cfg.chi,
        "tolerance": report.tolerance,
        "sizes": report.parity.sizes,
        "adjacent_deltas": report.adjacent_deltas,
        "converged_from": report.converged_from.map(|s| s as u64),
        "converged": report.converged_from.is_some(),
        "parity": parity_report_json(SweepFamily::Classical, &report.parity),
    })
}

fn kerr_outcome(cfg: &ExperimentConfig) -> Outcome {
    let grid = match cfg.grid.build() {
        Ok(grid) => grid,
        Err(e) => return Outcome::failed("grid", &e),
    };
    let sizes = sorted_sizes(&cfg.sizes);
    let mut sweep = run_sweep(&sizes, |size| {
        classical_member(cfg, &grid, size, "kerr_trace")
    });
    let mut degraded = !sweep.diagnostics.job_errors.is_empty();
    if !degraded {
        match analysis::kerr_report(&sweep.sizes, &sweep.traces, cfg.kerr_tolerance) {
            Ok(report) => {
                if report.converged_from.is_none() {
                    sweep.diagnostics.warnings.push(
                        "adjacent sizes still disagree at the largest sizes; \
                         convergence not reached within the size budget"
                            .into(),
                    );
                }
                sweep.files.push((
                    "kerr_report.json".into(),
                    json_bytes(&kerr_report_json(cfg, &report)),
                ));
            }
            Err(e) => {
                sweep
                    .diagnostics
                    .job_errors
                    .push(format!("kerr report: {e}"));
                degraded = true;
            }
        }
    }
    Outcome {
        files: sweep.files,
        diagnostics: sweep.diagnostics,
        degraded,
    }
}

fn scaling_outcome(cfg: &ExperimentConfig) -> Outcome {
    let grid = match cfg.grid.build() {
        Ok(grid) => grid,
        Err(e) => return Outcome::failed("grid", &e),
    };
    let mut values = cfg.pump_values.clone();
    values.sort_unstable();
    values.dedup();
    let results: Vec<(u64, Result<(f64, f64)>)> = values
        .par_iter()
        .map(|&nn| {
            (
                nn,
                analysis::scaling_response(cfg.n, nn, &grid, &cfg.propagator),
            )
        })
        .collect();
    let mut diagnostics = Diagnostics::default();
    let mut peaks = Vec::new();
    let mut means = Vec::new();
    for (nn, result) in &results {
        match result {
            Ok((peak, mean)) => {
                peaks.push(*peak);
                means.push(*mean);
            }
            Err(e) => diagnostics.job_errors.push(format!("N = {nn}: {e}")),
        }
    }
    if !diagnostics.job_errors.is_empty() {
        return Outcome {
            files: Vec::new(),
            diagnostics,
            degraded: true,
        };
    }
    let fit = match analysis::scaling_report(&values, &peaks, &means) {
        Ok(fit) => fit,
        Err(e) => {
            diagnostics.job_errors.push(format!("scaling fit: {e}"));
            return Outcome {
                files: Vec::new(),
                diagnostics,
                degraded: true,
            };
        }
    };
    let rows: Vec<Vec<String>> = values
        .iter()
        .zip(peaks.iter().zip(&means))
        .map(|(nn, (peak, mean))| vec![nn.to_string(), fmt_f(*peak), fmt_f(*mean)])
        .collect();
    let fit_json = |f: &analysis::PowerLawFit, response: &[f64]| {
        json!({
            "exponent": f.exponent,
            "log_intercept": f.log_intercept,
            "residual_rms": f.residual_rms,
            "response": response,
        })
    };
    let report = json!({
        "pump_values": values,
        "window": {"r_min": cfg.grid.r_min, "r_max": cfg.grid.r_max, "points": cfg.grid.points},
        "peak": fit_json(&fit.peak_fit, &fit.peak_response),
        "mean": fit_json(&fit.mean_fit, &fit.mean_response),
    });
    Outcome {
        files: vec![
            (
                "scaling_response.csv".into(),
                csv_bytes(&["N", "peak_n_a", "mean_n_a"], &rows),
            ),
            ("scaling_report.json".into(), json_bytes(&report)),
        ],
        diagnostics,
        degraded: false,
    }
}

fn extension_outcome(cfg: &ExperimentConfig) -> Outcome {
    let table = match analysis::extension_convergence(cfg.n, &cfg.sizes, cfg.eigenvalue_count) {
        Ok(table) => table,
        Err(e) => return Outcome::failed("extension table", &e),
    };
    let mut rows = Vec::new();
    for (size, values) in table.sizes.iter().zip(&table.eigenvalues) {
        for (j, v) in values.iter().enumerate() {
            rows.push(vec![size.to_string(), j.to_string(), fmt_f(*v)]);
        }
    }
    let report = json!({
        "sizes": table.sizes,
        "eigenvalue_count": cfg.eigenvalue_count,
        "gaps": table.gaps,
        "final_intra_gap": table.final_intra_gap(),
    });
    Outcome {
        files: vec![
            (
                "extension_eigenvalues.csv".into(),
                csv_bytes(&["size", "index", "lambda"], &rows),
            ),
            ("extension_report.json".into(), json_bytes(&report)),
        ],
        diagnostics: Diagnostics::default(),
        degraded: false,
    }
}
