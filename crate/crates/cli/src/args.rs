use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::output::Format;

/// Non-Markovianity of open two-qubit dynamics from LQFI and LQU.
///
/// Every command writes tabular data (CSV by default) to `--out` or standard
/// output. Settings can also come from `--config FILE` with one
/// `key = value` per line; explicit flags take precedence.
#[derive(Debug, Parser)]
#[command(name = "lqfi", version, args_override_self = true)]
pub struct Cli {
    /// Output file (a directory for `sweep`); standard output if omitted.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Worker threads; defaults to the number of logical CPUs.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,

    /// key = value settings applied before command-line flags.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Seed for randomly generated test states.
    #[arg(long, global = true, default_value_t = 20240601)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// N(s) for Ohmic-family dephasing of a Bell pair.
    Dephasing(DephasingArgs),
    /// N(λ/γ₀) for amplitude damping in a Lorentzian reservoir.
    Amplitude(AmplitudeArgs),
    /// Q, U and their rates under random-telegraph depolarizing noise.
    Depolarizing(DepolarizingArgs),
    /// Regenerate all default tables into the `--out` directory.
    Sweep(SweepArgs),
    /// Run the invariant checks and print a pass/fail table.
    Verify(VerifyArgs),
    /// Compare closed forms against brute-force and integro-differential oracles.
    Oracle(OracleArgs),
}

fn grid_size(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n < 100 {
        return Err(format!("grid size must be at least 100, got {n}"));
    }
    Ok(n)
}

fn positive_count(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n == 0 {
        return Err("count must be positive".into());
    }
    Ok(n)
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct DephasingArgs {
    #[arg(long, default_value_t = 1.0)]
    pub s_min: f64,
    #[arg(long, default_value_t = 6.0)]
    pub s_max: f64,
    /// Number of s values, endpoints included.
    #[arg(long, default_value_t = 50, value_parser = positive_count)]
    pub s_steps: usize,
    /// Reservoir cutoff frequency ω_c.
    #[arg(long, default_value_t = 1.0)]
    pub omega_c: f64,
    /// End of the time window; 30/ω_c if omitted.
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Scan and detail grid size.
    #[arg(long, default_value_t = 2000, value_parser = grid_size)]
    pub grid: usize,
    /// Write per-t detail tables for every s into this directory.
    #[arg(long, value_name = "DIR")]
    pub detail_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct AmplitudeArgs {
    #[arg(long, default_value_t = 0.05)]
    pub ratio_min: f64,
    #[arg(long, default_value_t = 2.5)]
    pub ratio_max: f64,
    /// Number of λ/γ₀ values, endpoints included.
    #[arg(long, default_value_t = 50, value_parser = positive_count)]
    pub steps: usize,
    /// Coupling γ₀; λ = ratio·γ₀.
    #[arg(long, default_value_t = 1.0)]
    pub gamma0: f64,
    /// Detuning Δ.
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    /// End of the time window; 25/γ₀ if omitted.
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long, default_value_t = 2000, value_parser = grid_size)]
    pub grid: usize,
    #[arg(long, value_name = "DIR")]
    pub detail_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct DepolarizingArgs {
    /// Memory parameter μ of the telegraph noise.
    #[arg(long, default_value_t = 3.0)]
    pub mu: f64,
    #[arg(long, default_value_t = 0.6)]
    pub r1: f64,
    #[arg(long, default_value_t = -0.4)]
    pub r2: f64,
    #[arg(long, default_value_t = 0.2)]
    pub r3: f64,
    #[arg(long, default_value_t = 10.0)]
    pub nu_max: f64,
    /// Number of ν grid points.
    #[arg(long, default_value_t = 1000, value_parser = grid_size)]
    pub steps: usize,
    /// Also maximize N over X-state initial conditions on a grid of this spacing.
    #[arg(long, value_name = "STEP")]
    pub maximize_step: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 50, value_parser = positive_count)]
    pub s_points: usize,
    #[arg(long, default_value_t = 50, value_parser = positive_count)]
    pub ratio_points: usize,
    #[arg(long, default_value_t = 2000, value_parser = grid_size)]
    pub grid: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct VerifyArgs {
    /// Random states used by the measure checks.
    #[arg(long, default_value_t = 50, value_parser = positive_count)]
    pub states: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct OracleArgs {
    /// Random states compared against the brute-force minimizer.
    #[arg(long, default_value_t = 20, value_parser = positive_count)]
    pub states: usize,
    /// Coarse sphere resolution of the brute-force minimizer (≥ 32).
    #[arg(long, default_value_t = 40)]
    pub resolution: usize,
}
