use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "suslov",
    version,
    about = "Suslov problem with a rotor: equilibria, invariant measures, flows"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stability table of the steady rotations and the measure-existence predicates.
    Analyze(AnalyzeArgs),
    /// Integrate one trajectory, optionally reconstructing the attitude.
    Simulate(SimulateArgs),
    /// Seeded family of trajectories on an energy ellipsoid, forward and backward.
    Portrait(PortraitArgs),
    /// Check div(M X) = 0 for the class-A density, or report why none exists.
    Verify(VerifyArgs),
    /// Monte Carlo check of mu(phi_t(A)) = mu(A) on a box.
    Transport(TransportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Built-in test systems usable instead of a parameter file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Fixture {
    /// x' = (-x1, 2 x2) with density |x1|^5 x2^2.
    Planar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensityChoice {
    /// The density vanishing on the invariant planes (requires a2 = 0).
    ClassA,
    /// Lebesgue measure.
    Unit,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub params: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub params: PathBuf,
    /// Initial angular velocity, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub omega: Vec<f64>,
    #[arg(long = "T", default_value_t = 100.0, allow_negative_numbers = true)]
    pub horizon: f64,
    /// Relative integrator tolerance (absolute is tol / 100).
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long)]
    pub reconstruct: bool,
    #[arg(long)]
    pub project_energy: bool,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PortraitArgs {
    #[arg(long)]
    pub params: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    #[arg(long = "T", default_value_t = 50.0)]
    pub horizon: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Number of initial conditions.
    #[arg(long, default_value_t = 24)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub project_energy: bool,
    /// Output directory for the trajectory files and manifest.json.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, required_unless_present = "fixture", conflicts_with = "fixture")]
    pub params: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub fixture: Option<Fixture>,
    /// Number of off-plane sample points.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Relative tolerance on |div(M X)|.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TransportArgs {
    #[arg(long, required_unless_present = "fixture", conflicts_with = "fixture")]
    pub params: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub fixture: Option<Fixture>,
    #[arg(long, value_enum, default_value = "class-a")]
    pub density: DensityChoice,
    /// Lower box corner, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub lower: Option<Vec<f64>>,
    /// Upper box corner, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub upper: Option<Vec<f64>>,
    #[arg(long = "T", default_value_t = 1.0, allow_negative_numbers = true)]
    pub horizon: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
