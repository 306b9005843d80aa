use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use qbattery::sweeps::{Axis, Scaling};
use qbattery::{Model, Normalization, PowerMetric, Topology};

#[derive(Debug, Parser)]
#[command(
    name = "qbattery",
    version,
    about = "Charging quench dynamics of JCH and Dicke quantum batteries"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Single Jaynes-Cummings-Hubbard quench.
    Jch(RunArgs),
    /// Single generalized Dicke quench.
    Dicke(RunArgs),
    /// Closed-form single-emitter Rabi oscillation.
    Rabi(RunArgs),
    /// Parameter sweep, either a named preset or a custom axis.
    Sweep(RunArgs),
    /// Dicke photon-cutoff convergence check.
    Convergence(RunArgs),
}

impl Command {
    pub fn args(&self) -> &RunArgs {
        match self {
            Command::Jch(a)
            | Command::Dicke(a)
            | Command::Rabi(a)
            | Command::Sweep(a)
            | Command::Convergence(a) => a,
        }
    }
}

/// Flags shared by every subcommand. Unset flags fall back to the config
/// file, then to built-in defaults.
#[derive(Debug, Default, Clone, Args)]
pub struct RunArgs {
    /// TOML file with defaults for any of these flags.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Model of a custom sweep.
    #[arg(long)]
    pub model: Option<Model>,
    /// Number of two-level systems.
    #[arg(long)]
    pub n: Option<usize>,
    /// Initial photons per two-level system.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Counter-rotating coupling, a number or `same`.
    #[arg(long)]
    pub beta_prime: Option<String>,
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Detuning omega_a - omega_c (rabi only).
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub omega_c: Option<f64>,
    #[arg(long)]
    pub omega_a: Option<f64>,
    /// line, ring or all.
    #[arg(long)]
    pub topology: Option<Topology>,
    /// sqrt-n or none.
    #[arg(long)]
    pub normalization: Option<Normalization>,
    /// Dicke photon cutoff(s) as multiples of N m.
    #[arg(long, value_delimiter = ',')]
    pub cutoff_mult: Option<Vec<usize>>,
    /// Multiply every Dicke matrix element by omega_c.
    #[arg(long)]
    pub literal_elements: bool,

    /// Scan horizon.
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Number of points on the coarse time grid.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Relative time tolerance of the refinement.
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// quotient or derivative.
    #[arg(long)]
    pub metric: Option<PowerMetric>,
    /// Largest basis diagonalized densely.
    #[arg(long)]
    pub dense_limit: Option<usize>,

    /// Named sweep preset.
    #[arg(long)]
    pub preset: Option<String>,
    /// Axis of a custom sweep: n, m, kappa or beta.
    #[arg(long)]
    pub axis: Option<Axis>,
    /// Comma-separated axis values of a custom sweep.
    #[arg(long, value_delimiter = ',')]
    pub values: Option<Vec<f64>>,
    /// none, per-n, per-sqrt-m or times-kappa.
    #[arg(long)]
    pub scaling: Option<Scaling>,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Record per-point wall time in the table.
    #[arg(long)]
    pub timing: bool,

    /// Result table (CSV).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Energy time series (CSV).
    #[arg(long)]
    pub series_out: Option<PathBuf>,
    /// gnuplot script rendering the table.
    #[arg(long)]
    pub plot_out: Option<PathBuf>,
}
