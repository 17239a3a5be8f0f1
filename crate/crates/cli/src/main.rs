//! `sturmian`: generate and check multidimensional Sturmian configurations.
//!
//! Exit codes: 0 on success, 1 when a check fails, 2 on parse, guard or
//! argument errors. The precision cap of the exact floor ladder can be set
//! through `STURMIAN_PRECISION_CAP`.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sturmian::Side;

#[derive(Parser, Debug)]
#[command(name = "sturmian", version, about = "Exact multidimensional Sturmian configurations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the patch of c or c' on a box.
    Generate(GenerateArgs),
    /// Check a pair for indistinguishability.
    Verify(VerifyArgs),
    /// Measured against predicted rectangular complexity.
    Complexity(ComplexityArgs),
    /// Extension-graph records as tab-separated lines.
    Bispecial(BispecialArgs),
    /// Rhombus tiling of a planar configuration as SVG.
    Tiling(TilingArgs),
    /// Compare restriction to e_1^⊥ with the lower-dimensional coding.
    Reduce(ReduceArgs),
    /// Stabilization of a sequence of Sturmian pairs on a window.
    Etale(EtaleArgs),
    /// Symbol counts on a box beside the window lengths.
    Frequencies(FrequenciesArgs),
}

#[derive(Args, Debug, Clone)]
pub struct SlopeArgs {
    /// Comma-separated surd literals, e.g. "sqrt(3)-1, sqrt(2)-1".
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    /// Expected dimension; checked against the slope.
    #[arg(short = 'd', long = "dim")]
    pub dim: Option<usize>,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub intercept: String,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideArg {
    Lower,
    Upper,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Lower => Side::Lower,
            SideArg::Upper => Side::Upper,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub slope: SlopeArgs,
    #[arg(long, value_enum, default_value = "lower")]
    pub side: SideArg,
    /// Per-axis ranges `lo:hi`, comma separated; defaults to -7:7 on each axis.
    #[arg(long = "box", allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Write a pair file (both codings, difference set, backgrounds).
    #[arg(long)]
    pub emit_pair: bool,
    /// Accept a slope whose irrationality is not proven; output is watermarked.
    #[arg(long)]
    pub assume_irrational: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Pair file; without it, the pair (c, c') of --alpha is used.
    pub pair: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub intercept: String,
    /// Largest support size enumerated.
    #[arg(long, default_value_t = 4)]
    pub max_size: usize,
    /// Overrides the default support-size guard.
    #[arg(long)]
    pub guard: Option<usize>,
    /// Enumerate boxes of volume <= max-size instead of connected sets.
    #[arg(long)]
    pub boxes: bool,
    /// Margin used to check the declared difference set of a pair file.
    #[arg(long, default_value_t = 4)]
    pub margin: i64,
    /// Half-side of the window scanned for the complexity clause.
    #[arg(long, default_value_t = 24)]
    pub window: i64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ComplexityArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    /// Shapes such as "1x3,3x1,2x2"; in dimension 1 plain lengths "1,2,3".
    #[arg(long)]
    pub shapes: String,
}

#[derive(Args, Debug)]
pub struct BispecialArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    /// "box:3x2", "empty", or points "0,0;1,0".
    #[arg(long, allow_hyphen_values = true)]
    pub support: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub left: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub right: Option<String>,
    /// Sample this many (support, left, right) triples instead.
    #[arg(long)]
    pub sample: Option<usize>,
    #[arg(long, default_value_t = 4)]
    pub max_size: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Keep records that are not bispecial.
    #[arg(long)]
    pub all: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TilingArgs {
    #[command(flatten)]
    pub slope: SlopeArgs,
    #[arg(long, value_enum, default_value = "lower")]
    pub side: SideArg,
    #[arg(long = "box", allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Pixels per unit edge.
    #[arg(long, default_value_t = 24.0)]
    pub scale: f64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    /// Number of reduction steps; defaults to d - 1.
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long, value_enum, default_value = "lower")]
    pub side: SideArg,
    /// Total cells compared per level, spread over a cube.
    #[arg(long, default_value_t = 200)]
    pub cells: usize,
    /// Print both windows.
    #[arg(long)]
    pub show: bool,
}

#[derive(Args, Debug)]
pub struct EtaleArgs {
    /// Slope template with `{n}`, e.g. "(sqrt(2)-1)/{n}, (sqrt(3)-1)/{n}".
    #[arg(long, allow_hyphen_values = true)]
    pub sequence: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub from: u64,
    #[arg(long, default_value_t = 32)]
    pub to: u64,
    /// Explicit terms, repeated; used when no template is given.
    #[arg(long = "term", allow_hyphen_values = true)]
    pub terms: Vec<String>,
    #[arg(long = "box", allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Write the limiting patches as a pair file.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FrequenciesArgs {
    #[command(flatten)]
    pub slope: SlopeArgs,
    #[arg(long, value_enum, default_value = "lower")]
    pub side: SideArg,
    #[arg(long = "box", allow_hyphen_values = true)]
    pub window: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => commands::generate(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Complexity(a) => commands::complexity(&a),
        Command::Bispecial(a) => commands::bispecial(&a),
        Command::Tiling(a) => commands::tiling(&a),
        Command::Reduce(a) => commands::reduce(&a),
        Command::Etale(a) => commands::etale(&a),
        Command::Frequencies(a) => commands::frequencies(&a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}
