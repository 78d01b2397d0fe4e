//! Command-line front end for the geometry engine: structured configs in,
//! deterministic reports out.
//!
//! Exit codes: 0 verdict pass, 1 verdict fail, 2 configuration or usage
//! error.  The JSON report always goes to stdout; `--json` and `--md`
//! additionally write files.

mod config;
mod markdown;
mod report;
mod run;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{parse_field_arg, parse_model_arg, Mode, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "triflow", version)]
#[command(about = "verification and classification of invariant unit vector fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML run configuration; the subcommand and flags below override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Model: unimodular:a,b,g | catalog:NAME[:k=v,...] | chart:NAME[:k=v,...]
    /// (full frame tables go in a config file).
    #[arg(long, global = true)]
    model: Option<String>,

    /// Field: e1..e3, optionally negated (-e2), or three components x,y,z.
    #[arg(long, global = true)]
    field: Option<String>,

    /// Algebraic tolerance for the float kernel.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Finite-difference step for chart curvature.
    #[arg(long = "fd-step", global = true)]
    fd_step: Option<f64>,

    /// Also write the JSON report to this path.
    #[arg(long, global = true)]
    json: Option<PathBuf>,

    /// Also write a markdown rendering to this path.
    #[arg(long, global = true)]
    md: Option<PathBuf>,

    /// Worker threads for sweep mode.
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Seed for sweep mode.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Connection, curvature, invariants and the identity suite for one
    /// model/field pair
    Analyze,
    /// Analyze plus case dispatch and normal-form emission
    Classify,
    /// Search the unit sphere for harmonic directions
    Find,
    /// Compare a coordinate chart against its frame model by finite
    /// differences
    ChartVerify,
    /// Check every built-in model against its recorded facts
    Catalog,
    /// Analyze and classify a seeded batch of random models
    Sweep,
}

fn mode_of(cmd: &Command) -> Mode {
    match cmd {
        Command::Analyze => Mode::Analyze,
        Command::Classify => Mode::Classify,
        Command::Find => Mode::Find,
        Command::ChartVerify => Mode::ChartVerify,
        Command::Catalog => Mode::Catalog,
        Command::Sweep => Mode::Sweep,
    }
}

fn build_config(cli: &Cli) -> Result<RunConfig, String> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("{}: {e}", path.display()))?;
            RunConfig::from_toml(&text)?
        }
        None => RunConfig::new(mode_of(&cli.command)),
    };
    cfg.mode = mode_of(&cli.command);
    if let Some(m) = &cli.model {
        cfg.model = Some(parse_model_arg(m)?);
    }
    if let Some(f) = &cli.field {
        cfg.field = Some(parse_field_arg(f)?);
    }
    if let Some(t) = cli.tol {
        cfg.tolerances.algebraic = t;
    }
    if let Some(h) = cli.fd_step {
        cfg.tolerances.fd_step = h;
    }
    if let Some(p) = &cli.json {
        cfg.output.json_path = Some(p.clone());
    }
    if let Some(p) = &cli.md {
        cfg.output.markdown_path = Some(p.clone());
    }
    if let Some(w) = cli.workers {
        cfg.sweep.workers = w;
    }
    if let Some(s) = cli.seed {
        cfg.sweep.seed = s;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match build_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match run::run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let json = report.to_json();
    print!("{json}");
    if let Some(path) = &cfg.output.json_path {
        if let Err(e) = std::fs::write(path, &json) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if let Some(path) = &cfg.output.markdown_path {
        if let Err(e) = std::fs::write(path, markdown::render(&report)) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if report.verdict.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
