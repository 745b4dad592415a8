use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "quadrant-ruin", version, about = "Joint ruin probabilities for two companies sharing claims")]
pub struct Cli {
    #[command(flatten)]
    pub model: ModelSource,

    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads for sweeps and simulation.
    #[arg(long, global = true, env = "QUADRANT_RUIN_THREADS")]
    pub threads: Option<usize>,

    /// Absolute tolerance for quadrature and grid checks.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ModelSource {
    /// JSON model file.
    #[arg(long, short, global = true, conflicts_with_all = ["lambda", "mu", "c", "delta"])]
    pub model: Option<PathBuf>,

    /// Claim arrival intensity (inline model).
    #[arg(long, global = true)]
    pub lambda: Option<f64>,

    /// Exponential claim intensity (inline model).
    #[arg(long, global = true)]
    pub mu: Option<f64>,

    /// Premium rates c1 c2 (inline model).
    #[arg(long, global = true, num_args = 2, value_names = ["C1", "C2"], allow_negative_numbers = true)]
    pub c: Option<Vec<f64>>,

    /// Claim shares delta1 delta2 (inline model, default 1 1).
    #[arg(long, global = true, num_args = 2, value_names = ["D1", "D2"], allow_negative_numbers = true)]
    pub delta: Option<Vec<f64>>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the derived constants and regime.
    Derive {
        #[arg(long)]
        json: bool,
    },
    /// Ruin probability (or its discounted transform) at raw reserves.
    Ruin(RuinArgs),
    /// Evaluate the double Laplace transform of the survival probability.
    Transform {
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        p_im: f64,
        #[arg(long, allow_negative_numbers = true)]
        q: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        q_im: f64,
    },
    /// Survival probability by numerical double inversion.
    Invert {
        #[arg(long, num_args = 2, value_names = ["U1", "U2"], required = true)]
        u: Vec<f64>,
        /// Euler parameter; the check run uses M + 5.
        #[arg(long, default_value_t = crate::inversion::DEFAULT_M)]
        euler_m: usize,
    },
    /// Monte Carlo estimate.
    Simulate(SimulateArgs),
    /// Solve the characteristic system on a grid.
    Pde(PdeArgs),
    /// Closed-form survival on a rectangular grid of normalized reserves.
    Table {
        /// lo hi n
        #[arg(long, num_args = 3, value_names = ["LO", "HI", "N"], required = true)]
        x1: Vec<String>,
        #[arg(long, num_args = 3, value_names = ["LO", "HI", "N"], required = true)]
        x2: Vec<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuinMethod {
    Exact,
    Pde,
    Mc,
    Invert,
}

#[derive(Debug, Args)]
pub struct RuinArgs {
    #[arg(long, num_args = 2, value_names = ["U1", "U2"], required = true)]
    pub u: Vec<f64>,
    /// Discount rate of the ruin time.
    #[arg(long, default_value_t = 0.0)]
    pub s: f64,
    #[arg(long, value_enum)]
    pub method: Option<RuinMethod>,
    #[command(flatten)]
    pub mc: McArgs,
    /// Grid steps for the pde method.
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    /// Step-halving tolerance for the pde method.
    #[arg(long, default_value_t = 1e-4)]
    pub grid_tol: f64,
}

#[derive(Debug, Args)]
pub struct McArgs {
    /// Number of paths (accepts 1e6).
    #[arg(long, default_value = "100000", value_parser = parse_count)]
    pub paths: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Finite horizon for direct simulation.
    #[arg(long, default_value_t = 100.0)]
    pub horizon: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimMethod {
    Naive,
    Conditional,
    Fluid,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, num_args = 2, value_names = ["U1", "U2"], required = true)]
    pub u: Vec<f64>,
    #[command(flatten)]
    pub mc: McArgs,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long, value_enum, default_value = "naive")]
    pub method: SimMethod,
}

#[derive(Debug, Args)]
pub struct PdeArgs {
    #[arg(long, default_value_t = 0.0)]
    pub s: f64,
    #[arg(long, default_value_t = 10.0)]
    pub rmax: f64,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    /// Report only the value at raw reserves u1 u2.
    #[arg(long, num_args = 1..=2, value_names = ["U1", "U2"], value_delimiter = ',')]
    pub point: Option<Vec<f64>>,
    /// Single march without step halving.
    #[arg(long)]
    pub no_halving: bool,
    /// Step-halving tolerance.
    #[arg(long, default_value_t = 1e-4)]
    pub grid_tol: f64,
}

fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    match s.parse::<f64>() {
        Ok(x) if x >= 1.0 && x.fract() == 0.0 && x <= u64::MAX as f64 => Ok(x as u64),
        _ => Err(format!("expected a positive whole number, got {s}")),
    }
}
