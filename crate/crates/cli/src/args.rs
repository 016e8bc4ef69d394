use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const MAX_LEVEL_ENV: &str = "GAUGELAB_MAX_LEVEL";

const GRAMMAR: &str = "\
Expressions use the grammar
  expr   := term (('+'|'-') term)*
  term   := factor (('*'|'/') factor)*
  factor := '-' factor | power
  power  := atom ('^' factor)?
  atom   := number | ident | ident '(' expr ')' | '(' expr ')'
with variables s (or x for functions of a path value) and the functions
sin, cos, exp, log, sqrt, abs.";

const EXIT_CODES: &str = "\
Exit codes: 0 converged (or success), 2 diverged or oscillating,
3 inconclusive, 1 usage or runtime error.";

#[derive(Parser, Debug)]
#[command(name = "gaugelab", version, about = "Riemann, Stieltjes, gauge and Lebesgue integrals over explicit divisions, and pathwise Brownian sums", after_help = EXIT_CODES)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Integrate a parsed or catalog integrand and report the refinement trace.
    #[command(after_help = format!("{GRAMMAR}\n\nCatalog entries: {}\n\n{EXIT_CODES}", gaugelab::catalog::entry_names().join(", ")))]
    Integrate(IntegrateArgs),
    /// Monte Carlo statistics of pathwise sums over Brownian paths.
    #[command(after_help = format!("{GRAMMAR}\n\n{EXIT_CODES}"))]
    Brownian(BrownianArgs),
    /// Partial sums of the alternating harmonic series and its split parts.
    Series(SeriesArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodArg {
    Darboux,
    Rs,
    Gauge,
    Lebesgue,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleArg {
    /// f at the tag
    Tag,
    /// f at the left endpoint
    Left,
    /// f at the midpoint
    Mid,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Leave the timestamp out of JSON metadata, for reproducible artifacts.
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Args, Debug)]
pub struct IntegrateArgs {
    /// Integral definition; defaults to the catalog entry's own method.
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    /// Point factor f as an expression in s.
    #[arg(long, conflicts_with = "catalog", required_unless_present = "catalog")]
    pub expr: Option<String>,
    /// Interval factor: `length`, `dD` (Dirichlet, exact arithmetic) or `dg:<catalog entry>`.
    #[arg(long = "dI", value_name = "FACTOR", default_value = "length")]
    pub d_interval: String,
    /// Where the point factor is evaluated.
    #[arg(long, value_enum, default_value_t = RuleArg::Tag)]
    pub rule: RuleArg,
    /// Named catalog entry.
    #[arg(long)]
    pub catalog: Option<String>,
    /// Lower bound (default: the catalog entry's domain, else 0).
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Upper bound (default: the catalog entry's domain, else 1).
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// Absolute tolerance ε (default 1e-9, or the catalog entry's tolerance).
    #[arg(long)]
    pub tol: Option<f64>,
    /// First refinement level.
    #[arg(long)]
    pub min_level: Option<u32>,
    /// Last refinement level.
    #[arg(long, env = MAX_LEVEL_ENV)]
    pub max_level: Option<u32>,
    /// Stability window W.
    #[arg(long)]
    pub window: Option<usize>,
    /// Comma-separated grid strategies for the constant-δ integrators
    /// (rational-left, rational-mid, rational-right, irrational-left).
    #[arg(long, value_delimiter = ',')]
    pub strategies: Vec<String>,
    /// Comma-separated tag selectors for the gauge integrator (standard, reversed, interior).
    #[arg(long, value_delimiter = ',')]
    pub selectors: Vec<String>,
    /// Use gauges shrinking towards this singular point (gauge method).
    #[arg(long, allow_negative_numbers = true)]
    pub singular_at: Option<f64>,
    /// Compensated summation of float sums.
    #[arg(long)]
    pub compensated: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BrownianSub {
    /// Quadratic variation Σ(Δx)²
    Qv,
    /// Itô sum Σ f(x(u))Δx
    Ito,
    /// Stratonovich sum Σ f(x(w))Δx, w the temporal midpoint
    Strat,
    /// Increment integral Σ Δx
    Increment,
    /// Total variation Σ|Δx|
    Variation,
    /// Itô formula residual f(x(t)) − f(x(0)) − Σ f′Δx − ½ Σ f″(Δx)²
    ItoResidual,
}

impl BrownianSub {
    pub fn name(self) -> &'static str {
        match self {
            BrownianSub::Qv => "qv",
            BrownianSub::Ito => "ito",
            BrownianSub::Strat => "strat",
            BrownianSub::Increment => "increment",
            BrownianSub::Variation => "variation",
            BrownianSub::ItoResidual => "ito-residual",
        }
    }
}

#[derive(Args, Debug)]
pub struct BrownianArgs {
    #[arg(value_enum)]
    pub sub: BrownianSub,
    /// Horizon t > 0.
    #[arg(long)]
    pub t: f64,
    /// Division level L (2^L cells).
    #[arg(long)]
    pub level: u32,
    /// Number of paths M.
    #[arg(long)]
    pub paths: u64,
    /// Master seed (unsigned 64-bit).
    #[arg(long)]
    pub seed: u64,
    /// Also report every level from this one up to --level (one row each).
    #[arg(long)]
    pub from_level: Option<u32>,
    /// Point factor f(x) for ito, strat and ito-residual.
    #[arg(long)]
    pub f: Option<String>,
    /// f′(x) for ito-residual.
    #[arg(long)]
    pub df: Option<String>,
    /// f″(x) for ito-residual.
    #[arg(long)]
    pub d2f: Option<String>,
    /// Write per-path values as `path,value` CSV to this file.
    #[arg(long, value_name = "FILE")]
    pub per_path: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SeriesArgs {
    /// Number of terms.
    #[arg(long)]
    pub n: u64,
    /// Emit a row every this many terms (default: only the last).
    #[arg(long)]
    pub step: Option<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}
