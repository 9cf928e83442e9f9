use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "meanforce",
    version,
    about = "Brownian oscillator in a Drude bath: stability, free energy, dynamics"
)]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a single parameter point (exit 0 stable, 1 critical, 2 unstable).
    #[command(allow_negative_numbers = true)]
    Stability(StabilityArgs),
    /// Hybridization free energy and ϑ(0) over a range of η.
    #[command(allow_negative_numbers = true)]
    SweepEta(SweepArgs),
    /// Mean and covariance trajectory from a factorized initial state.
    #[command(allow_negative_numbers = true)]
    Dynamics(DynamicsArgs),
    /// Subdivision potential and entropy gaps over temperature.
    #[command(allow_negative_numbers = true)]
    Subdivision(SubdivisionArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Stability(_) => "stability",
            Command::SweepEta(_) => "sweep-eta",
            Command::Dynamics(_) => "dynamics",
            Command::Subdivision(_) => "subdivision",
        }
    }

    pub fn common(&self) -> &Common {
        match self {
            Command::Stability(a) => &a.common,
            Command::SweepEta(a) => &a.common,
            Command::Dynamics(a) => &a.common,
            Command::Subdivision(a) => &a.common,
        }
    }
}

#[derive(Debug, Args)]
pub struct Common {
    /// System frequency Ω_S.
    #[arg(long, default_value_t = 1.0, value_parser = parse_f64)]
    pub omega_s: f64,
    /// Drude cutoff rate γ.
    #[arg(long, default_value_t = 2.0, value_parser = parse_f64)]
    pub gamma: f64,
    /// Numerical tolerance (meaning depends on the command).
    #[arg(long, value_parser = parse_f64)]
    pub tol: Option<f64>,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// File of `key = value` lines; command-line flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,
}

#[derive(Debug, Args)]
#[group(multiple = false)]
pub struct Temperature {
    /// Inverse temperature β (default 5).
    #[arg(long, value_parser = parse_f64)]
    pub beta: Option<f64>,
    /// Temperature k_BT.
    #[arg(long, value_parser = parse_f64)]
    pub temperature: Option<f64>,
}

impl Temperature {
    pub fn beta(&self) -> f64 {
        match (self.beta, self.temperature) {
            (Some(b), _) => b,
            (None, Some(t)) => 1.0 / t,
            (None, None) => 5.0,
        }
    }
}

#[derive(Debug, Args)]
pub struct StabilityArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub temperature: Temperature,
    /// Reorganization energy η.
    #[arg(long, default_value_t = 0.2, value_parser = parse_f64)]
    pub eta: f64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub temperature: Temperature,
    #[arg(long, default_value_t = 0.0, value_parser = parse_f64)]
    pub eta_min: f64,
    #[arg(long, default_value_t = 0.5, value_parser = parse_f64)]
    pub eta_max: f64,
    /// Number of η points, endpoints included.
    #[arg(long, default_value_t = 51, value_parser = clap::value_parser!(u32).range(1..))]
    pub eta_steps: u32,
}

#[derive(Debug, Args)]
pub struct DynamicsArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub temperature: Temperature,
    #[arg(long, default_value_t = 0.2, value_parser = parse_f64)]
    pub eta: f64,
    #[arg(long, default_value_t = 60.0, value_parser = parse_f64)]
    pub t_max: f64,
    #[arg(long, default_value_t = 0.1, value_parser = parse_f64)]
    pub dt: f64,
    #[arg(long, default_value_t = 1.0, value_parser = parse_f64)]
    pub q0: f64,
    #[arg(long, default_value_t = 0.0, value_parser = parse_f64)]
    pub p0: f64,
    /// Initial σ_qq (default: bare thermal value).
    #[arg(long, value_parser = parse_f64)]
    pub sigma_qq: Option<f64>,
    #[arg(long, value_parser = parse_f64)]
    pub sigma_pp: Option<f64>,
    #[arg(long, value_parser = parse_f64)]
    pub sigma_qp: Option<f64>,
    /// Fixed bath mode count including the Drude mode (default: adaptive).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub modes: Option<u32>,
}

#[derive(Debug, Args)]
pub struct SubdivisionArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated list of η values.
    #[arg(long, value_delimiter = ',', default_values_t = [0.15, 0.3, 0.45], value_parser = parse_f64)]
    pub eta: Vec<f64>,
    #[arg(long, default_value_t = 0.02, value_parser = parse_f64)]
    pub temp_min: f64,
    #[arg(long, default_value_t = 5.0, value_parser = parse_f64)]
    pub temp_max: f64,
    /// Number of logarithmically spaced temperatures, endpoints included.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
    pub temp_steps: u32,
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}
