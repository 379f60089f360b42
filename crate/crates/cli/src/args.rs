use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use diffavoid::LogBase;

#[derive(Debug, Parser)]
#[command(
    name = "diffavoid",
    version,
    about = "Difference-avoiding sets in (F_p)^n: residues, bounds, exact search, certificates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the kth power residues mod p (with 0) and their count.
    Residues {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Evaluate the upper bounds; comma lists produce one row per (p, k, n).
    Bound(BoundArgs),
    /// Exact maximum difference-avoiding set, checked against the bound.
    Search(SearchArgs),
    /// Check a witness file and print its certificate (exit 2 on a violation).
    Verify(VerifyArgs),
    /// Clique number of the Paley graph of order p (p = 1 mod 4).
    Paley {
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        limits: LimitArgs,
        /// Write the Paley graph in DIMACS format.
        #[arg(long, value_name = "PATH")]
        dimacs: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("box").required(true).args(["k", "t"])))]
pub struct BoundArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub p: Vec<u64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<u32>,
    #[arg(long, value_delimiter = ',', conflicts_with = "t")]
    pub k: Vec<u64>,
    /// |K| when K is not a residue set.
    #[arg(long, value_delimiter = ',')]
    pub t: Vec<u64>,
    /// Add Green's threshold (needs --k and n = 1).
    #[arg(long)]
    pub green: bool,
    #[arg(long, value_name = "BASE", default_value = "natural")]
    pub log_base: LogBase,
    /// Add the sqrt(p) - 1 reference value (p = 1 mod 4).
    #[arg(long)]
    pub paley_ref: bool,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

/// The forbidden set: either `Q(k)` or an explicit list containing 0.
#[derive(Debug, Clone, Args)]
pub struct BoxArgs {
    #[arg(long, conflicts_with = "k_list")]
    pub k: Option<u64>,
    #[arg(long = "K", value_delimiter = ',', value_name = "LIST")]
    pub k_list: Option<Vec<u32>>,
}

#[derive(Debug, Clone, Args)]
pub struct LimitArgs {
    /// Seconds; 0 disables the limit.
    #[arg(long, default_value_t = 60.0)]
    pub time_limit: f64,
    #[arg(long)]
    pub node_budget: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub forbidden: BoxArgs,
    #[command(flatten)]
    pub limits: LimitArgs,
    /// Refuse instances with more than this many points.
    #[arg(long, default_value_t = diffavoid::graph::DEFAULT_VERTEX_LIMIT)]
    pub vertex_cap: u64,
    #[arg(long, value_name = "PATH")]
    pub dimacs: Option<PathBuf>,
    /// Write {p, n, K, A} for later use with `verify`.
    #[arg(long, value_name = "PATH")]
    pub witness_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// JSON with `A` and optionally `p`, `n`, `K`; flags override the file.
    pub file: PathBuf,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub forbidden: BoxArgs,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}
