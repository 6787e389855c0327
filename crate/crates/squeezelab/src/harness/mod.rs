//! Config-driven experiment runner.
//!
//! A single JSON document describes one experiment; [`parse_config`]
//! validates it against the schema in [`list_schema`], collecting every
//! problem instead of stopping at the first. [`run::run_experiment`]
//! executes the experiment and persists CSV traces, a JSON report, and a
//! provenance record with content digests.

mod run;

pub use run::{run_experiment, Diagnostics, ManifestEntry, RunRecord, RUN_RECORD_FILE};

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde_json::{Map, Value};

use crate::models::SizeSpec;
use crate::propagate::{Method, PropagatorConfig};

/// Environment variable overriding the default worker count.
pub const WORKERS_ENV: &str = "SQUEEZELAB_WORKERS";

/// The eight runnable experiments.
pub const EXPERIMENT_NAMES: [&str; 8] = [
    "classical",
    "pump",
    "ensemble",
    "spectrum",
    "parity-scan",
    "scaling",
    "kerr-convergence",
    "extension-convergence",
];

/// Which study a config drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Classical,
    Pump,
    Ensemble,
    Spectrum,
    ParityScan,
    Scaling,
    KerrConvergence,
    ExtensionConvergence,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Self::Classical => "classical",
            Self::Pump => "pump",
            Self::Ensemble => "ensemble",
            Self::Spectrum => "spectrum",
            Self::ParityScan => "parity-scan",
            Self::Scaling => "scaling",
            Self::KerrConvergence => "kerr-convergence",
            Self::ExtensionConvergence => "extension-convergence",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "classical" => Ok(Self::Classical),
            "pump" => Ok(Self::Pump),
            "ensemble" => Ok(Self::Ensemble),
            "spectrum" => Ok(Self::Spectrum),
            "parity-scan" => Ok(Self::ParityScan),
            "scaling" => Ok(Self::Scaling),
            "kerr-convergence" => Ok(Self::KerrConvergence),
            "extension-convergence" => Ok(Self::ExtensionConvergence),
            other => Err(format!(
                "unknown experiment {other:?}; expected one of {}",
                EXPERIMENT_NAMES.join(", ")
            )),
        }
    }
}

/// Model family swept by `parity-scan`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepFamily {
    /// Sweep classical truncation sizes `m`.
    Classical,
    /// Sweep initial pump photon numbers `N` on the common effective axis.
    Pump,
}

impl SweepFamily {
    pub fn name(self) -> &'static str {
        match self {
            Self::Classical => "classical",
            Self::Pump => "pump",
        }
    }
}

/// Uniform sweep-parameter grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
}

impl GridSpec {
    /// Materialize the grid values.
    pub fn build(&self) -> crate::error::Result<Vec<f64>> {
        crate::models::linear_grid(self.r_min, self.r_max, self.points)
    }
}

/// A fully validated experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    /// Squeezing order.
    pub n: u32,
    /// Kerr coefficient.
    pub chi: f64,
    /// Truncation size (classical, spectrum).
    pub size: Option<SizeSpec>,
    /// Initial pump photon number (pump).
    pub pump_photons: Option<u64>,
    /// Mean pump photon number `|α|²` (ensemble).
    pub mean_pump_photons: Option<f64>,
    /// Size sweep (parity-scan, kerr-convergence, extension-convergence).
    pub sizes: Vec<usize>,
    /// Pump photon sweep (scaling).
    pub pump_values: Vec<u64>,
    /// parity-scan family.
    pub family: SweepFamily,
    /// Sweep-parameter grid; `r̃` for pump/ensemble, effective `r` for
    /// scaling and pump-family parity scans, plain `r` otherwise.
    pub grid: GridSpec,
    pub propagator: PropagatorConfig,
    /// Worker threads; absent means environment override or all cores.
    pub workers: Option<usize>,
    /// Poisson mass allowed outside the ensemble window.
    pub tail_epsilon: f64,
    /// Cap on ensemble pump photon numbers.
    pub max_pump_photons: u64,
    /// Adjacent-size agreement declaring Kerr convergence.
    pub kerr_tolerance: f64,
    /// Low eigenvalues tracked by extension-convergence.
    pub eigenvalue_count: usize,
}

/// Everything wrong with a config document, path-annotated.
#[derive(Debug, Clone)]
pub struct ConfigError {
    pub problems: Vec<String>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "invalid configuration:")?;
        for p in &self.problems {
            writeln!(f, "  {p}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

impl ConfigError {
    fn single(problem: String) -> Self {
        Self {
            problems: vec![problem],
        }
    }
}

const KNOWN_KEYS: [&str; 22] = [
    "experiment",
    "n",
    "chi",
    "m",
    "total_dim",
    "N",
    "alpha_sq",
    "sizes",
    "pump_values",
    "family",
    "r_min",
    "r_max",
    "points",
    "method",
    "tolerance",
    "krylov_max_dim",
    "max_substep",
    "workers",
    "tail_epsilon",
    "max_pump_photons",
    "kerr_tolerance",
    "eigenvalue_count",
];

/// Parse and validate a JSON config document.
///
/// Returns either a complete config with defaults filled in, or the full
/// list of validation problems.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    validate_value(parse_json(text)?)
}

/// Like [`parse_config`], with the experiment name supplied externally
/// (the CLI positional). A conflicting `experiment` key is an error.
pub fn parse_config_for(experiment: &str, text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut value = parse_json(text)?;
    if let Some(map) = value.as_object_mut() {
        match map.get("experiment").and_then(Value::as_str) {
            Some(inner) if inner != experiment => {
                return Err(ConfigError::single(format!(
                    ".experiment: config says {inner:?} but the command line asked for \
                     {experiment:?}"
                )));
            }
            Some(_) => {}
            None => {
                map.insert("experiment".into(), Value::String(experiment.into()));
            }
        }
    }
    validate_value(value)
}

fn parse_json(text: &str) -> Result<Value, ConfigError> {
    serde_json::from_str(text).map_err(|e| ConfigError::single(format!("syntax error: {e}")))
}

/// Field-by-field validator collecting every problem.
struct Checker<'a> {
    map: &'a Map<String, Value>,
    problems: Vec<String>,
}

impl<'a> Checker<'a> {
    fn new(map: &'a Map<String, Value>) -> Self {
        Self {
            map,
            problems: Vec::new(),
        }
    }

    fn problem(&mut self, key: &str, detail: impl fmt::Display) {
        self.problems.push(format!(".{key}: {detail}"));
    }

    fn integer(&mut self, key: &str, min: u64, max: u64) -> Option<u64> {
        let value = self.map.get(key)?;
        let Some(v) = value.as_u64() else {
            self.problem(key, "expected a nonnegative integer");
            return None;
        };
        if v < min || v > max {
            if max == u64::MAX {
                self.problem(key, format!("must be at least {min}, got {v}"));
            } else {
                self.problem(key, format!("must be in [{min}, {max}], got {v}"));
            }
            return None;
        }
        Some(v)
    }

    fn number(&mut self, key: &str) -> Option<f64> {
        let value = self.map.get(key)?;
        let Some(v) = value.as_f64() else {
            self.problem(key, "expected a number");
            return None;
        };
        if !v.is_finite() {
            self.problem(key, "must be finite");
            return None;
        }
        Some(v)
    }

    fn positive(&mut self, key: &str) -> Option<f64> {
        let v = self.number(key)?;
        if v <= 0.0 {
            self.problem(key, format!("must be positive, got {v}"));
            return None;
        }
        Some(v)
    }

    fn string(&mut self, key: &str) -> Option<&'a str> {
        let value = self.map.get(key)?;
        let Some(s) = value.as_str() else {
            self.problem(key, "expected a string");
            return None;
        };
        Some(s)
    }

    fn integer_array(&mut self, key: &str, min: u64) -> Option<Vec<u64>> {
        let value = self.map.get(key)?;
        let Some(items) = value.as_array() else {
            self.problem(key, "expected an array of integers");
            return None;
        };
        let mut out = Vec::with_capacity(items.len());
        for (i, item) in items.iter().enumerate() {
            match item.as_u64() {
                Some(v) if v >= min => out.push(v),
                Some(v) => {
                    self.problem(key, format!("entry {i} must be at least {min}, got {v}"));
                    return None;
                }
                None => {
                    self.problem(key, format!("entry {i} is not a nonnegative integer"));
                    return None;
                }
            }
        }
        Some(out)
    }

    fn require(&mut self, key: &str, context: &str) {
        if !self.map.contains_key(key) {
            self.problem(key, format!("required for {context}"));
        }
    }
}

fn validate_value(value: Value) -> Result<ExperimentConfig, ConfigError> {
    let Some(map) = value.as_object() else {
        return Err(ConfigError::single(
            "root: expected a JSON object".to_string(),
        ));
    };
    let mut c = Checker::new(map);

    for key in map.keys() {
        if !KNOWN_KEYS.contains(&key.as_str()) {
            c.problem(key, "unknown key");
        }
    }

    let experiment = match c.string("experiment") {
        Some(s) => match Experiment::from_str(s) {
            Ok(e) => Some(e),
            Err(msg) => {
                c.problem("experiment", msg);
                None
            }
        },
        None => {
            if !map.contains_key("experiment") {
                c.problem("experiment", "required");
            }
            None
        }
    };

    let n = c.integer("n", 1, 64).unwrap_or(3) as u32;
    let chi = c.number("chi").unwrap_or(0.0);

    let sector = c.integer("m", 2, u64::MAX);
    let total_dim = c.integer("total_dim", 2, u64::MAX);
    if map.contains_key("m") && map.contains_key("total_dim") {
        c.problem("m", "give either m or total_dim, not both");
    }
    let size = match (sector, total_dim) {
        (Some(m), None) => Some(SizeSpec::Sector(m as usize)),
        (None, Some(d)) => Some(SizeSpec::TotalDim(d as usize)),
        _ => None,
    };

    let pump_photons = c.integer("N", 1, u64::MAX);
    let mean_pump_photons = c.positive("alpha_sq");

    let family = match c.string("family") {
        Some("classical") | None => SweepFamily::Classical,
        Some("pump") => SweepFamily::Pump,
        Some(other) => {
            c.problem(
                "family",
                format!("expected \"classical\" or \"pump\", got {other:?}"),
            );
            SweepFamily::Classical
        }
    };

    let size_floor = match (experiment, family) {
        (Some(Experiment::ParityScan), SweepFamily::Pump) => 1,
        _ => 2,
    };
    let sizes: Vec<usize> = c
        .integer_array("sizes", size_floor)
        .unwrap_or_default()
        .into_iter()
        .map(|v| v as usize)
        .collect();
    let pump_values = c.integer_array("pump_values", 1).unwrap_or_default();

    let method = match c.string("method") {
        Some(s) => match Method::from_str(s) {
            Ok(m) => m,
            Err(msg) => {
                c.problem("method", msg);
                Method::Spectral
            }
        },
        None => Method::Spectral,
    };
    let tolerance = match c.positive("tolerance") {
        Some(t) if t > crate::propagate::MAX_TOLERANCE => {
            c.problem(
                "tolerance",
                format!(
                    "must be at most {:.0e}, got {t}",
                    crate::propagate::MAX_TOLERANCE
                ),
            );
            crate::propagate::DEFAULT_TOLERANCE
        }
        Some(t) => t,
        None => crate::propagate::DEFAULT_TOLERANCE,
    };
    let krylov_max_dim = c
        .integer("krylov_max_dim", crate::propagate::MIN_KRYLOV_DIM as u64, 4096)
        .unwrap_or(crate::propagate::DEFAULT_KRYLOV_MAX_DIM as u64) as usize;
    let max_substep = c
        .positive("max_substep")
        .unwrap_or(crate::propagate::DEFAULT_MAX_SUBSTEP);

    let r_min = c.number("r_min").unwrap_or(0.0);
    let r_max = c.number("r_max").unwrap_or_else(|| match experiment {
        // Pump-parameter experiments default to the window that maps onto
        // effective r ∈ [0, 3].
        Some(Experiment::Pump) => match pump_photons {
            Some(nn) => 3.0 / (nn as f64).sqrt(),
            None => 3.0,
        },
        Some(Experiment::Ensemble) => match mean_pump_photons {
            Some(mu) => 3.0 / mu.sqrt(),
            None => 3.0,
        },
        _ => 3.0,
    });
    if r_min >= r_max {
        c.problem("r_max", format!("must exceed r_min = {r_min}, got {r_max}"));
    }
    let points = c.integer("points", 2, 10_000_000).unwrap_or(301) as usize;

    let workers = c.integer("workers", 1, 65_536).map(|v| v as usize);
    let tail_epsilon = match c.positive("tail_epsilon") {
        Some(e) if e >= 0.5 => {
            c.problem("tail_epsilon", format!("must be in (0, 0.5), got {e}"));
            crate::models::DEFAULT_TAIL_EPSILON
        }
        Some(e) => e,
        None => crate::models::DEFAULT_TAIL_EPSILON,
    };
    let max_pump_photons = c
        .integer("max_pump_photons", 1, u64::MAX)
        .unwrap_or(crate::models::DEFAULT_PUMP_CAP);
    let kerr_tolerance = c
        .positive("kerr_tolerance")
        .unwrap_or(crate::analysis::KERR_CONVERGENCE_TOL);
    let eigenvalue_count = c
        .integer("eigenvalue_count", 1, 8192)
        .unwrap_or(crate::analysis::EXTENSION_EIGENVALUE_COUNT as u64)
        as usize;

    if let Some(experiment) = experiment {
        check_experiment_requirements(&mut c, experiment, family, chi, size, &sizes, &pump_values);
    }

    let mut problems = c.problems;
    let Some(experiment) = experiment else {
        return Err(ConfigError { problems });
    };
    if !problems.is_empty() {
        problems.sort();
        problems.dedup();
        return Err(ConfigError { problems });
    }

    Ok(ExperimentConfig {
        experiment,
        n,
        chi,
        size,
        pump_photons,
        mean_pump_photons,
        sizes,
        pump_values,
        family,
        grid: GridSpec {
            r_min,
            r_max,
            points,
        },
        propagator: PropagatorConfig {
            method,
            tolerance,
            krylov_max_dim,
            max_substep,
        },
        workers,
        tail_epsilon,
        max_pump_photons,
        kerr_tolerance,
        eigenvalue_count,
    })
}

fn check_experiment_requirements(
    c: &mut Checker<'_>,
    experiment: Experiment,
    family: SweepFamily,
    chi: f64,
    size: Option<SizeSpec>,
    sizes: &[usize],
    pump_values: &[u64],
) {
    let name = experiment.name();
    match experiment {
        Experiment::Classical | Experiment::Spectrum => {
            if size.is_none() && !c.map.contains_key("m") && !c.map.contains_key("total_dim") {
                c.problem("m", format!("required for {name} (or .total_dim)"));
            }
        }
        Experiment::Pump => c.require("N", name),
        Experiment::Ensemble => c.require("alpha_sq", name),
        Experiment::ParityScan | Experiment::KerrConvergence => {
            if c.map.contains_key("sizes") {
                check_sweep_sizes(c, sizes, true);
            } else {
                c.require("sizes", name);
            }
            if experiment == Experiment::KerrConvergence {
                if family == SweepFamily::Pump {
                    c.problem("family", "kerr-convergence sweeps classical sizes only");
                }
                if chi == 0.0 {
                    c.problem("chi", "kerr-convergence needs a nonzero chi");
                }
            }
        }
        Experiment::Scaling => {
            if c.map.contains_key("pump_values") {
                let mut sorted: Vec<u64> = pump_values.to_vec();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() < 6 {
                    c.problem("pump_values", "needs at least 6 distinct values");
                }
                if sorted.windows(2).any(|w| w[0] % 2 != w[1] % 2) {
                    c.problem("pump_values", "must be a single parity class");
                }
            } else {
                c.require("pump_values", name);
            }
        }
        Experiment::ExtensionConvergence => {
            if c.map.contains_key("sizes") {
                check_sweep_sizes(c, sizes, false);
            } else {
                c.require("sizes", name);
            }
        }
    }
}

fn check_sweep_sizes(c: &mut Checker<'_>, sizes: &[usize], both_parities: bool) {
    let mut sorted = sizes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() < 4 {
        c.problem("sizes", "needs at least 4 distinct values");
        return;
    }
    let evens = sorted.iter().filter(|s| *s % 2 == 0).count();
    if both_parities {
        if evens == 0 || evens == sorted.len() {
            c.problem("sizes", "must contain both even and odd values");
        }
    } else if evens != 0 && evens != sorted.len() {
        c.problem("sizes", "must be a single parity class");
    }
}

impl ExperimentConfig {
    /// The effective config as a schema-conformant JSON document.
    ///
    /// Parsing the result reproduces `self` exactly.
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        map.insert("experiment".into(), self.experiment.name().into());
        map.insert("n".into(), self.n.into());
        map.insert("chi".into(), self.chi.into());
        match self.size {
            Some(SizeSpec::Sector(m)) => {
                map.insert("m".into(), (m as u64).into());
            }
            Some(SizeSpec::TotalDim(d)) => {
                map.insert("total_dim".into(), (d as u64).into());
            }
            None => {}
        }
        if let Some(nn) = self.pump_photons {
            map.insert("N".into(), nn.into());
        }
        if let Some(mu) = self.mean_pump_photons {
            map.insert("alpha_sq".into(), mu.into());
        }
        if !self.sizes.is_empty() {
            let sizes: Vec<Value> = self.sizes.iter().map(|s| (*s as u64).into()).collect();
            map.insert("sizes".into(), sizes.into());
        }
        if !self.pump_values.is_empty() {
            let values: Vec<Value> = self.pump_values.iter().map(|v| (*v).into()).collect();
            map.insert("pump_values".into(), values.into());
        }
        if self.experiment == Experiment::ParityScan {
            map.insert("family".into(), self.family.name().into());
        }
        map.insert("r_min".into(), self.grid.r_min.into());
        map.insert("r_max".into(), self.grid.r_max.into());
        map.insert("points".into(), (self.grid.points as u64).into());
        map.insert("method".into(), self.propagator.method.name().into());
        map.insert("tolerance".into(), self.propagator.tolerance.into());
        map.insert(
            "krylov_max_dim".into(),
            (self.propagator.krylov_max_dim as u64).into(),
        );
        map.insert("max_substep".into(), self.propagator.max_substep.into());
        if let Some(w) = self.workers {
            map.insert("workers".into(), (w as u64).into());
        }
        if self.experiment == Experiment::Ensemble {
            map.insert("tail_epsilon".into(), self.tail_epsilon.into());
            map.insert("max_pump_photons".into(), self.max_pump_photons.into());
        }
        if self.experiment == Experiment::KerrConvergence {
            map.insert("kerr_tolerance".into(), self.kerr_tolerance.into());
        }
        if self.experiment == Experiment::ExtensionConvergence {
            map.insert(
                "eigenvalue_count".into(),
                (self.eigenvalue_count as u64).into(),
            );
        }
        Value::Object(map)
    }

    /// Worker count after applying the environment override.
    ///
    /// Precedence: explicit config (which the CLI may have overridden),
    /// then [`WORKERS_ENV`], then one thread per core.
    pub fn resolved_workers(&self) -> usize {
        if let Some(w) = self.workers {
            return w;
        }
        if let Ok(raw) = std::env::var(WORKERS_ENV) {
            if let Ok(w) = raw.trim().parse::<usize>() {
                if w >= 1 {
                    return w;
                }
            }
        }
        0
    }
}

/// Human-readable schema dump: every key, type, default, and range.
pub fn list_schema() -> String {
    let mut out = String::new();
    out.push_str("squeezelab configuration schema (one JSON object per run)\n\n");
    out.push_str("experiments:\n");
    let blurbs = [
        ("classical", "one classical-pump run at fixed truncation"),
        ("pump", "one quantum-pump chain run at fixed N"),
        ("ensemble", "Poisson-weighted coherent-pump ensemble"),
        ("spectrum", "generator eigenvalues at fixed truncation"),
        ("parity-scan", "trace divergence across even/odd sizes"),
        ("scaling", "signal-photon response vs pump photon number"),
        ("kerr-convergence", "size convergence of the Kerr-regularized model"),
        ("extension-convergence", "low spectrum across one parity class"),
    ];
    for (name, blurb) in blurbs {
        out.push_str(&format!("  {name:<24}{blurb}\n"));
    }
    out.push_str("\nkeys (default \"-\" means the key is only meaningful when given):\n");
    out.push_str(&format!(
        "  {:<18}{:<9}{:<28}{}\n",
        "key", "type", "default", "constraints"
    ));
    let rows: [(&str, &str, &str, &str); 22] = [
        ("experiment", "string", "(required)", "one of the experiments above"),
        ("n", "integer", "3", "squeezing order, 1 to 64"),
        ("chi", "number", "0", "Kerr coefficient of the chi*(a^dag a)^2 term"),
        ("m", "integer", "-", "sector size, >= 2 (classical, spectrum; excludes total_dim)"),
        ("total_dim", "integer", "-", "total Fock dimension, >= 2 (alternative to m)"),
        ("N", "integer", "-", "initial pump photon number, >= 1 (pump)"),
        ("alpha_sq", "number", "-", "mean pump photon number |alpha|^2 > 0 (ensemble)"),
        ("sizes", "array", "-", "sweep sizes (parity-scan, kerr-convergence, extension-convergence)"),
        ("pump_values", "array", "-", ">= 6 pump photon numbers of one parity (scaling)"),
        ("family", "string", "classical", "parity-scan family: classical or pump"),
        ("r_min", "number", "0", "grid start"),
        ("r_max", "number", "3 (pump/ensemble: 3/sqrt(N))", "grid end, > r_min"),
        ("points", "integer", "301", "grid points, >= 2"),
        ("method", "string", "spectral", "spectral, krylov, or reference"),
        ("tolerance", "number", "1e-10", "propagation accuracy target, (0, 1e-4]"),
        ("krylov_max_dim", "integer", "48", "Krylov subspace cap, 4 to 4096"),
        ("max_substep", "number", "25", "cap on |dr|*||H|| per Krylov substep, > 0"),
        ("workers", "integer", "all cores", "worker threads, >= 1"),
        ("tail_epsilon", "number", "1e-8", "Poisson mass outside the ensemble window, (0, 0.5)"),
        ("max_pump_photons", "integer", "4096", "cap on ensemble window N"),
        ("kerr_tolerance", "number", "1e-6", "adjacent-size agreement declaring convergence, > 0"),
        ("eigenvalue_count", "integer", "20", "low eigenvalues tracked per size, 1 to 8192"),
    ];
    for (key, ty, default, range) in rows {
        out.push_str(&format!("  {key:<18}{ty:<9}{default:<28}{range}\n"));
    }
    out.push_str(&format!(
        "\nenvironment:\n  {WORKERS_ENV}  default worker count when neither --workers nor \
         .workers is set\n"
    ));
    out
}

/// Distinct keys accepted by the schema (for documentation tests).
pub fn known_keys() -> BTreeSet<&'static str> {
    KNOWN_KEYS.iter().copied().collect()
}
