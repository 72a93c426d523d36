use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lcfn::Method;

#[derive(Debug, Parser)]
#[command(name = "lcfn", version, about = "Linearly correlated fuzzy numbers: arithmetic, calculus and variational checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub output: OutputArgs,

    #[command(flatten)]
    pub quadrature: QuadratureArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format; csv is available for grid reports only.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct QuadratureArgs {
    /// Absolute tolerance of the quadrature.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// `simpson`, `gauss-legendre` or `gauss-legendre:N`.
    #[arg(long, global = true)]
    pub method: Option<Method>,

    /// Recursion limit of adaptive quadrature.
    #[arg(long, global = true)]
    pub max_depth: Option<u32>,
}

#[derive(Debug, Args)]
pub struct GenArg {
    /// Generator config (JSON).
    #[arg(long)]
    pub gen: PathBuf,
}

/// Where a fuzzy function comes from: a scenario file, flags, or both (flags win).
#[derive(Debug, Args)]
pub struct FnArgs {
    /// Generator config (JSON); overrides the scenario's generator.
    #[arg(long)]
    pub gen: Option<PathBuf>,

    /// Scenario file (JSON).
    #[arg(long)]
    pub scenario: Option<PathBuf>,

    /// Expression for r(t).
    #[arg(long)]
    pub r: Option<String>,

    /// Expression for q(t).
    #[arg(long)]
    pub q: Option<String>,

    /// Domain endpoints.
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
    pub domain: Option<Vec<f64>>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare two elements in the total order.
    Compare {
        #[command(flatten)]
        gen: GenArg,
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
    },
    /// Norm |q| + |r + a_m q|.
    Norm {
        #[command(flatten)]
        gen: GenArg,
        #[arg(allow_hyphen_values = true)]
        value: String,
    },
    /// Sign class of the center.
    Classify {
        #[command(flatten)]
        gen: GenArg,
        #[arg(allow_hyphen_values = true)]
        value: String,
    },
    /// Cross product of two elements.
    Cross {
        #[command(flatten)]
        gen: GenArg,
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
    },
    /// Alpha-level of an element as a crisp interval.
    AlphaLevel {
        #[command(flatten)]
        gen: GenArg,
        #[arg(allow_hyphen_values = true)]
        value: String,
        #[arg(long)]
        alpha: f64,
    },
    /// Symbolic derivative of a fuzzy function.
    Differentiate {
        #[command(flatten)]
        f: FnArgs,
        #[arg(long, default_value_t = 1)]
        order: usize,
        /// Also evaluate the derivative at this point.
        #[arg(long, allow_negative_numbers = true)]
        at: Option<f64>,
    },
    /// Integral of a fuzzy function over its domain.
    Integrate {
        #[command(flatten)]
        f: FnArgs,
    },
    /// Stationary points of the center, classified and verified in the order.
    CriticalPoints {
        #[command(flatten)]
        f: FnArgs,
        /// Sampling radius of the local-order verification.
        #[arg(long, default_value_t = 1e-3)]
        radius: f64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Numerical checks of the calculus and variational lemmas.
    Verify {
        #[command(subcommand)]
        check: Check,
    },
}

#[derive(Debug, Subcommand)]
pub enum Check {
    /// Witness sequence b_k and mollifier recovery at t0, or a scan over the domain.
    Lagrange {
        #[command(flatten)]
        f: FnArgs,
        /// Harness config (JSON): epsilon, l, k, grid.
        #[arg(long)]
        harness: Option<PathBuf>,
        /// Point to test; defaults to the scenario's t0. Without either, scans the domain.
        #[arg(long, allow_negative_numbers = true)]
        t0: Option<f64>,
        /// Scan the domain even when a t0 is known.
        #[arg(long)]
        scan: bool,
    },
    /// Sine-catalog residuals of the integral identity for g' = f.
    DbrForward {
        #[command(flatten)]
        f: FnArgs,
    },
    /// Mean value, accumulated integral and residuals of f minus its mean.
    DbrReconstruct {
        #[command(flatten)]
        f: FnArgs,
        #[arg(long, default_value_t = 1024)]
        grid: usize,
    },
    /// Differentiation in eps under the integral sign.
    Interchange {
        #[command(flatten)]
        f: FnArgs,
        #[arg(long, allow_negative_numbers = true)]
        eps0: Option<f64>,
    },
    /// Fundamental theorem of calculus.
    Ftc {
        #[command(flatten)]
        f: FnArgs,
    },
    /// Integration by parts against the scenario's g.
    Ibp {
        #[command(flatten)]
        f: FnArgs,
    },
    /// Nonnegativity of the center of the integral of f squared.
    SquareIntegral {
        #[command(flatten)]
        f: FnArgs,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Compare { .. } => "compare",
            Command::Norm { .. } => "norm",
            Command::Classify { .. } => "classify",
            Command::Cross { .. } => "cross",
            Command::AlphaLevel { .. } => "alpha-level",
            Command::Differentiate { .. } => "differentiate",
            Command::Integrate { .. } => "integrate",
            Command::CriticalPoints { .. } => "critical-points",
            Command::Verify { check } => match check {
                Check::Lagrange { .. } => "verify lagrange",
                Check::DbrForward { .. } => "verify dbr-forward",
                Check::DbrReconstruct { .. } => "verify dbr-reconstruct",
                Check::Interchange { .. } => "verify interchange",
                Check::Ftc { .. } => "verify ftc",
                Check::Ibp { .. } => "verify ibp",
                Check::SquareIntegral { .. } => "verify square-integral",
            },
        }
    }
}
