//! Thin CLI over the experiment harness.
//!
//! `squeezelab <experiment> --config <path> [--out <dir>] [--workers k]
//! [--method spectral|krylov]` runs one experiment; `squeezelab schema`
//! prints the config schema. Exit codes: 0 success, 1 usage or config
//! error, 2 physics failure, 3 I/O failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use squeezelab::harness::{self, ExperimentConfig, RunRecord};
use squeezelab::propagate::Method;
use squeezelab::Error;

#[derive(Parser)]
#[command(name = "squeezelab", version, about = "Generalized-squeezing numerical laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single classical-pump evolution.
    Classical(RunArgs),
    /// Run a quantum-pump chain at fixed N.
    Pump(RunArgs),
    /// Run a Poisson-weighted coherent-pump ensemble.
    Ensemble(RunArgs),
    /// Solve the generator spectrum at fixed truncation.
    Spectrum(RunArgs),
    /// Compare traces across even and odd sizes.
    #[command(name = "parity-scan")]
    ParityScan(RunArgs),
    /// Fit the signal-photon response against pump photon number.
    Scaling(RunArgs),
    /// Locate the size where the Kerr-regularized model converges.
    #[command(name = "kerr-convergence")]
    KerrConvergence(RunArgs),
    /// Track the low spectrum of one parity class across sizes.
    #[command(name = "extension-convergence")]
    ExtensionConvergence(RunArgs),
    /// Print every config key, type, default, and range.
    Schema,
}

#[derive(Args)]
struct RunArgs {
    /// JSON experiment description (see `squeezelab schema`).
    #[arg(long)]
    config: PathBuf,
    /// Output directory for traces, reports, and the run record.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads (overrides config and environment).
    #[arg(long)]
    workers: Option<usize>,
    /// Propagation method (overrides config).
    #[arg(long, value_parser = parse_cli_method)]
    method: Option<Method>,
}

fn parse_cli_method(s: &str) -> Result<Method, String> {
    match s {
        "spectral" => Ok(Method::Spectral),
        "krylov" => Ok(Method::Krylov),
        other => Err(format!("unknown method {other:?}; expected spectral or krylov")),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (name, args) = match cli.command {
        Command::Schema => {
            print!("{}", harness::list_schema());
            return ExitCode::SUCCESS;
        }
        Command::Classical(args) => ("classical", args),
        Command::Pump(args) => ("pump", args),
        Command::Ensemble(args) => ("ensemble", args),
        Command::Spectrum(args) => ("spectrum", args),
        Command::ParityScan(args) => ("parity-scan", args),
        Command::Scaling(args) => ("scaling", args),
        Command::KerrConvergence(args) => ("kerr-convergence", args),
        Command::ExtensionConvergence(args) => ("extension-convergence", args),
    };
    ExitCode::from(run(name, args))
}

fn run(name: &str, args: RunArgs) -> u8 {
    let text = match std::fs::read_to_string(&args.config) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: cannot read config {}: {e}", args.config.display());
            return 1;
        }
    };
    let mut cfg: ExperimentConfig = match harness::parse_config_for(name, &text) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprint!("error: {e}");
            return 1;
        }
    };
    if let Some(workers) = args.workers {
        cfg.workers = Some(workers);
    }
    if let Some(method) = args.method {
        cfg.propagator.method = method;
    }

    match harness::run_experiment(&cfg, &args.out) {
        Ok(record) => {
            report(&record, &args.out);
            if record.is_ok() {
                0
            } else {
                2
            }
        }
        Err(Error::Io(e)) => {
            eprintln!("error: i/o failure under {}: {e}", args.out.display());
            3
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn report(record: &RunRecord, out: &std::path::Path) {
    eprintln!(
        "{}: {} ({} file{})",
        record.experiment,
        record.status,
        record.outputs.len(),
        if record.outputs.len() == 1 { "" } else { "s" },
    );
    for entry in &record.outputs {
        eprintln!("  {}", out.join(&entry.path).display());
    }
    for warning in &record.diagnostics.warnings {
        eprintln!("  warning: {warning}");
    }
    for error in &record.diagnostics.job_errors {
        eprintln!("  job error: {error}");
    }
}
