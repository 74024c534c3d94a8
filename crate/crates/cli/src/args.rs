use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "orbitmetric", version, about = "Quotient distances, invariant embeddings and distortion certificates")]
pub struct Cli {
    /// Seed for every randomized command.
    #[arg(long, global = true, env = "ORBITMETRIC_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Worker threads for sampling commands.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

/// Vectors are comma-separated numbers (`1,-2.5,0`) or a JSON array.
/// JSON inputs are file paths, or inline JSON when the argument starts with `{` or `[`.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quotient distance and max filter between two representatives.
    Distance(PairArgs),
    /// Max filter of two representatives, or a max filter bank against templates.
    Maxfilter(MaxfilterArgs),
    /// Evaluate an embedding on one vector or on every point of a dataset.
    Embed(EmbedArgs),
    /// Stream sampled (input distance, output distance) pairs of a projective map.
    FigureScatter(ScatterArgs),
    /// Compare the SDP distortion of even cycles with the closed form.
    CycleTable(CycleArgs),
    /// Solve the Euclidean distortion SDP of a finite metric.
    Sdp(SdpArgs),
    /// Check a dual certificate against a claimed distortion.
    VerifyDual(VerifyArgs),
    /// Search finite subsets of a quotient for large certified distortion.
    LowerBound(LowerBoundArgs),
    /// Minimum output/input distance ratio near a point, per radius.
    Probe(ProbeArgs),
    /// Classical MDS of quotient distances, with the embedding error bound.
    Mds(MdsArgs),
    /// k-means in the target space of an embedding, pulled back.
    Kmeans(KmeansArgs),
    /// Nearest neighbor through an embedding, checked against brute force.
    Ann(AnnArgs),
    /// Bispectrum of a complex (or real) vector.
    Bispectrum(BispectrumArgs),
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// Group description (JSON).
    #[arg(long)]
    pub group: String,
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    #[arg(long, allow_hyphen_values = true)]
    pub y: String,
}

#[derive(Debug, Args)]
pub struct MaxfilterArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "templates")]
    pub y: Option<String>,
    /// JSON array of template vectors.
    #[arg(long, conflicts_with = "y")]
    pub templates: Option<String>,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    /// Embedding description (JSON, tagged by `family`).
    #[arg(long)]
    pub map: String,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "data")]
    pub x: Option<String>,
    /// Dataset (JSON); every point is embedded.
    #[arg(long, conflicts_with = "x")]
    pub data: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScatterFamily {
    ProjectiveRaw,
    ProjectiveNormalized,
    ProjectiveSphere,
}

#[derive(Debug, Args)]
pub struct ScatterArgs {
    #[arg(long, value_enum)]
    pub family: ScatterFamily,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,
    /// Ambient dimension of `R^d`.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// CSV destination; only the summary is printed without it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CycleArgs {
    /// Even cycle lengths, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "4,6,8,12")]
    pub n: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct MetricSource {
    /// Metric file `{"n", "D"}` of squared distances.
    #[arg(long, conflicts_with = "cycle", required_unless_present = "cycle")]
    pub metric: Option<String>,
    /// Use the shortest-path metric of the n-cycle.
    #[arg(long)]
    pub cycle: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SdpArgs {
    #[command(flatten)]
    pub source: MetricSource,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Primal certificate destination `{"t", "Q"}`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Dual certificate destination `{"Q"}`.
    #[arg(long)]
    pub dual_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: MetricSource,
    /// Dual certificate `{"Q"}`; defaults to the circulant certificate with `--cycle`.
    #[arg(long)]
    pub dual: Option<String>,
    /// Claimed distortion.
    #[arg(long)]
    pub c: f64,
    /// Exit with status 1 unless the certificate proves optimality.
    #[arg(long)]
    pub expect_optimal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Space {
    /// `R^dim` under the trivial group.
    Euclidean,
    /// `ℓ²(Z)` modulo shifts.
    Shift,
    /// Multisets of points of `R^dim`.
    Multiset,
}

#[derive(Debug, Args)]
pub struct LowerBoundArgs {
    #[arg(long, value_enum, default_value = "shift")]
    pub space: Space,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Largest support of sampled sequences or multisets.
    #[arg(long, default_value_t = 8)]
    pub support: usize,
    #[arg(long, default_value_t = 8)]
    pub size: usize,
    #[arg(long, default_value_t = 500)]
    pub rounds: usize,
    /// Archive destination for the witness and certificates.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[arg(long)]
    pub map: String,
    /// Center representative; the origin when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub center: Option<String>,
    /// Strictly decreasing radii.
    #[arg(long, value_delimiter = ',', default_value = "1e-1,1e-2,1e-3,1e-4,1e-5,1e-6")]
    pub radii: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MdsArgs {
    #[arg(long)]
    pub data: String,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Embedding with claimed bounds whose distances are compared against.
    #[arg(long)]
    pub map: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KmeansArgs {
    #[arg(long)]
    pub data: String,
    #[arg(long)]
    pub map: String,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnnArgs {
    #[arg(long)]
    pub data: String,
    #[arg(long)]
    pub map: String,
    #[arg(long, allow_hyphen_values = true)]
    pub query: String,
}

#[derive(Debug, Args)]
pub struct BispectrumArgs {
    /// Interleaved real and imaginary parts.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "real")]
    pub x: Option<String>,
    /// Real signal.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "x")]
    pub real: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
