use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "girthkit", version, about = "Girth estimates, roundtrip covers and spanners")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a seeded random graph.
    Gen(GenArgs),
    /// Write the degree-reduced graph and its vertex map.
    Regularize(RegularizeArgs),
    /// Estimate or compute the girth.
    #[command(subcommand)]
    Girth(GirthCommand),
    /// Build a roundtrip cover at one radius.
    #[command(subcommand)]
    Cover(CoverCommand),
    /// Build a roundtrip spanner.
    #[command(subcommand)]
    Spanner(SpannerCommand),
    /// Check a cover or spanner against the exact oracle.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Run a benchmark suite and write one CSV row per instance and algorithm.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Er,
    PlantedGirth,
    RingOfCliques,
    GridChords,
    RandomRegular,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: GenKind,
    #[arg(long)]
    pub n: usize,
    /// Edge probability (er, planted-girth).
    #[arg(long)]
    pub p: Option<f64>,
    /// Planted girth (planted-girth).
    #[arg(long)]
    pub girth: Option<u64>,
    /// Number of cliques (ring-of-cliques).
    #[arg(long)]
    pub cliques: Option<usize>,
    /// Number of random chords (grid-chords).
    #[arg(long)]
    pub chords: Option<usize>,
    /// Permutations per vertex (random-regular).
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub min_weight: u64,
    #[arg(long, default_value_t = 100)]
    pub max_weight: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RegularizeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub map: PathBuf,
}

#[derive(Debug, Args)]
pub struct GraphArg {
    #[arg(long)]
    pub graph: PathBuf,
}

#[derive(Debug, Args)]
pub struct RandomArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Reseeded attempts after a failed ball growth.
    #[arg(long, default_value_t = 3)]
    pub retries: u32,
    /// Small sampling constants (exercise ball growing on small graphs).
    #[arg(long)]
    pub light: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Binary,
    Geometric,
}

#[derive(Debug, Subcommand)]
pub enum GirthCommand {
    Exact(GraphArg),
    Approx3 {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, value_enum, default_value_t = Mode::Binary)]
        mode: Mode,
        #[arg(long, default_value_t = 0.25)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Compare with the exact girth and fail unless within the bound.
        #[arg(long)]
        verify: bool,
    },
    Det {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        verify: bool,
    },
    Klogk {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[command(flatten)]
        random: RandomArgs,
        #[arg(long)]
        verify: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum CoverCommand {
    Det {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        radius: u64,
        #[arg(long)]
        verify: bool,
    },
    Klogk {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        radius: u64,
        #[command(flatten)]
        random: RandomArgs,
        #[arg(long)]
        verify: bool,
    },
}

#[derive(Debug, Args)]
pub struct SpannerOut {
    /// Write the spanner's edges in the graph text format.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Check the stretch against the exact oracle.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Debug, Subcommand)]
pub enum SpannerCommand {
    Const8 {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value_t = 0.25)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        light: bool,
        #[command(flatten)]
        output: SpannerOut,
    },
    Det {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[command(flatten)]
        output: SpannerOut,
    },
    Klogk {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[command(flatten)]
        random: RandomArgs,
        #[command(flatten)]
        output: SpannerOut,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    Cover {
        #[command(flatten)]
        graph: GraphArg,
        /// Cover JSON as written by `cover`.
        #[arg(long)]
        object: PathBuf,
        /// Allowed ball radius as a multiple of the cover radius; defaults
        /// to the cover's own stretch.
        #[arg(long)]
        alpha: Option<f64>,
        /// Defaults to the cover's own radius.
        #[arg(long)]
        radius: Option<u64>,
    },
    Spanner {
        #[command(flatten)]
        graph: GraphArg,
        /// Spanner as a graph file or as the JSON written by `spanner`.
        #[arg(long)]
        object: PathBuf,
        #[arg(long)]
        alpha: f64,
        /// Only check pairs with roundtrip distance at most this.
        #[arg(long)]
        radius: Option<u64>,
    },
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Suite description (JSON).
    #[arg(long)]
    pub suite: PathBuf,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
