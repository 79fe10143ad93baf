use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "toric-codes",
    version,
    about = "Evaluation codes over projective tori and clutter-parameterized toric sets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Length, dimension and minimum distance of C_X(d)
    Params(CodeArgs),
    /// One row per degree: dimension, formula and oracle distances
    Table(CodeArgs),
    /// Generator (evaluation) matrix of C_X(d)
    Genmat(CodeArgs),
    /// Basis of the degree-d forms vanishing on X
    Kernel(CodeArgs),
    /// Hilbert function up to the regularity index
    Hilbert(SetArgs),
    /// Size of X and the complete-intersection test
    TorusCheck(TorusCheckArgs),
    /// Zero-count bounds, for one polynomial or a seeded random sweep
    Bounds(BoundsArgs),
    /// Run every cross-check over a grid of fields and dimensions
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output format
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write output here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Cap on enumerated points
    #[arg(long, default_value_t = toric_codes::geometry::DEFAULT_POINT_CAP, value_parser = positive)]
    pub cap_points: u64,
    /// Cap on enumerated nonzero messages (q^k - 1)
    #[arg(long, default_value_t = toric_codes::codes::DEFAULT_CODEWORD_CAP, value_parser = positive)]
    pub cap_codewords: u64,
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// Characteristic of the field
    #[arg(long)]
    pub p: u64,
    /// Extension degree
    #[arg(long, default_value_t = 1)]
    pub m: u32,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct SetSource {
    /// Use the projective torus in P^{s-1}
    #[arg(long)]
    pub s: Option<usize>,
    /// Use the toric set of a clutter file {"n": .., "edges": [[..], ..]}
    #[arg(long)]
    pub clutter: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct SetArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub set: SetSource,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct CodeArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub set: SetSource,
    /// Degree
    #[arg(long, conflicts_with = "d_range")]
    pub d: Option<u32>,
    /// Inclusive degree range A..B
    #[arg(long, value_parser = parse_range)]
    pub d_range: Option<RangeInclusive<u32>>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct TorusCheckArgs {
    #[command(flatten)]
    pub set: SetArgs,
    /// Include the point list in the output
    #[arg(long)]
    pub points: bool,
}

#[derive(Args, Debug, Clone)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Number of variables
    #[arg(long)]
    pub s: usize,
    /// Degree
    #[arg(long, conflicts_with = "d_range")]
    pub d: Option<u32>,
    /// Inclusive degree range A..B
    #[arg(long, value_parser = parse_range)]
    pub d_range: Option<RangeInclusive<u32>>,
    /// Check this polynomial, e.g. "1*t1^2 + 2*t2"
    #[arg(long, conflicts_with_all = ["samples", "d", "d_range"])]
    pub poly: Option<String>,
    /// Check this many seeded random polynomials
    #[arg(long, conflicts_with_all = ["d", "d_range"])]
    pub samples: Option<usize>,
    /// Seed for the random sweep
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    /// Field orders in the grid
    #[arg(long, value_delimiter = ',', default_values_t = [3u64, 4, 5])]
    pub q: Vec<u64>,
    /// Torus dimensions s in the grid (points in P^{s-1})
    #[arg(long = "s", value_delimiter = ',', default_values_t = [2usize, 3, 4])]
    pub s_values: Vec<usize>,
    /// Random polynomials per (q, s) bound sweep
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Seed for the bound sweeps
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Run every kernel on the calling thread
    #[arg(long)]
    pub sequential: bool,
    #[arg(long, hide = true, value_enum)]
    pub inject_fault: Option<FaultArg>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    EllOffByOne,
}

fn positive(s: &str) -> Result<u64, String> {
    match s.parse::<u64>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let (a, b) = s.split_once("..").ok_or("expected A..B")?;
    let a: u32 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: u32 = b.trim().trim_start_matches('=').parse().map_err(|e| format!("{e}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok(a..=b)
}
