use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "directfem", version, about = "Direct serendipity and direct mixed finite elements on polygonal meshes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate, audit or repair meshes.
    #[command(subcommand)]
    Mesh(MeshCommand),
    /// Solve the test problem on one mesh and report errors.
    Solve(SolveArgs),
    /// Solve on a sequence of meshes and report errors and rates.
    Convergence(ConvergenceArgs),
}

#[derive(Subcommand, Debug)]
pub enum MeshCommand {
    /// Write a generated mesh as JSON.
    Gen(GenArgs),
    /// Print size and shape-regularity statistics of a mesh file.
    Audit {
        #[arg(long)]
        mesh: PathBuf,
        /// Also write the statistics as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Collapse edges shorter than rel-tol * h and write the result.
    Collapse {
        #[arg(long)]
        mesh: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        rel_tol: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Square,
    Trapezoid,
    PerturbedQuad,
    #[value(alias = "hex-dominant")]
    Hex,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Primal,
    MixedReduced,
    MixedFull,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Exact {
    OneHump,
    FourHump,
    Zero,
}

#[derive(Args, Debug, Clone)]
pub struct MeshSource {
    #[arg(long, value_enum, default_value_t = Family::Hex)]
    pub family: Family,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Vertex noise for the perturbed-quad family, relative to h.
    #[arg(long, default_value_t = 0.2)]
    pub noise: f64,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[command(flatten)]
    pub source: MeshSource,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct ProblemArgs {
    #[arg(long, value_enum, default_value_t = Method::Primal)]
    pub method: Method,
    #[arg(long)]
    pub r: usize,
    #[arg(long, value_enum, default_value_t = Exact::OneHump)]
    pub exact: Exact,
    /// Forces the quadrature degree on every cell.
    #[arg(long)]
    pub quad_degree: Option<usize>,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub source: MeshSource,
    /// Generated mesh size (ignored with --mesh).
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    /// Read the mesh from a JSON file instead of generating it.
    #[arg(long)]
    pub mesh: Option<PathBuf>,
    /// Per-cell L2 errors of p as CSV.
    #[arg(long)]
    pub dump_element_errors: Option<PathBuf>,
    /// Error summary as CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub source: MeshSource,
    /// Mesh sizes, strictly increasing.
    #[arg(long, value_delimiter = ',', default_value = "4,8,16")]
    pub levels: Vec<usize>,
    /// Mesh files used as the levels instead of a generated family, coarse to fine.
    #[arg(long, value_delimiter = ',')]
    pub mesh: Vec<PathBuf>,
    /// Table as CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
