use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "pcx",
    version,
    about = "Schönflies scans and core decompositions of rasterized planar compacta"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rasterize a generator and write it as a PBM bitmap.
    Gen(GenArgs),
    /// Label the components of K and of its complement.
    Components(CommonArgs),
    /// Count strip crossings across a range of levels.
    Scan(ScanArgs),
    /// Compute the decomposition seeded by accumulating crossings.
    Decompose(CommonArgs),
    /// Contract the classes of the decomposition into a graph.
    Quotient(QuotientArgs),
    /// Compare two decompositions stored as JSON.
    Compare(CompareArgs),
    /// Draw K as SVG, coloring the classes of its decomposition.
    Render(RenderArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Svg,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Strips,
    Annuli,
    Both,
}

/// Where the compactum comes from.
#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// Built-in generator name.
    #[arg(
        long,
        value_name = "NAME",
        conflicts_with = "input",
        required_unless_present = "input"
    )]
    pub gen: Option<String>,
    /// PBM (P1 or P4) bitmap.
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,
    /// Seed of random_blobs.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Number of bars of `bars`.
    #[arg(long, default_value_t = 3)]
    pub count: usize,
    /// Subdivision base; must match the generator's.
    #[arg(long)]
    pub base: Option<u32>,
}

#[derive(Debug, Clone, Args)]
pub struct RelationArgs {
    /// Members a cluster needs before its limit is merged.
    #[arg(long, default_value_t = 4)]
    pub nmin: usize,
    /// Linkage radius in cells.
    #[arg(long, default_value_t = 2.5)]
    pub delta: f64,
    /// Strip offset step in cells.
    #[arg(long, default_value_t = 2)]
    pub stride: i64,
    #[arg(long, value_enum, default_value_t = Family::Strips)]
    pub family: Family,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Worker threads.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Write the result here instead of standard output.
    #[arg(long, short, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value_t = 5)]
    pub level: u32,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Grid level; defaults to 5, or the bitmap's own level.
    #[arg(long)]
    pub level: Option<u32>,
    #[command(flatten)]
    pub relation: RelationArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Inclusive level range `a..b`, or a single level.
    #[arg(long, default_value = "2..6")]
    pub levels: String,
    /// `h:<c1>:<c2>`, `v:<c1>:<c2>` or `auto` (the default strip family of the
    /// coarsest level); repeatable.
    #[arg(long = "strip", default_value = "auto")]
    pub strips: Vec<String>,
    /// Also histogram bounded complementary components at this rank.
    #[arg(long)]
    pub holes: Option<usize>,
    #[command(flatten)]
    pub relation: RelationArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Args)]
pub struct QuotientArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Branch length tolerated by the arc test, in graph steps.
    #[arg(long, default_value_t = 4)]
    pub spur: usize,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[arg(long, value_name = "PATH")]
    pub a: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub b: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Draw K in one color without decomposing it.
    #[arg(long)]
    pub plain: bool,
}
