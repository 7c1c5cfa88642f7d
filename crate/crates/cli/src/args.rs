use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rcw_core::gen::Fixture;
use rcw_core::mixing::{Starts, DEFAULT_SAMPLE};

#[derive(Debug, Parser)]
#[command(
    name = "rcw",
    version,
    about = "Non-backtracking walks on regular graphs"
)]
pub struct Cli {
    /// Record wall-clock time in the manifest (repeated runs then differ).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a graph file.
    Gen {
        #[command(subcommand)]
        which: GenCommand,
    },
    /// Full adjacency spectrum and Ramanujan classification.
    Spectrum(SpectrumArgs),
    /// Total-variation profile of the walk and mixing times.
    Mix(MixArgs),
    /// Variance of walk-count rows, by counts and by eigen-expansion.
    Variance(VarianceArgs),
    /// Table of W_2(t)/N(t) against the Kesten measure.
    Conjecture(ConjectureArgs),
    /// Distance tails against the almost-diameter bounds.
    Diameter(DiameterArgs),
    /// Distance from uniform at (1+eta) log_p n against the density bound.
    Density(DensityArgs),
    /// Run every check on built-in fixtures.
    Verify(VerifyArgs),
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// One of k4, petersen, heawood, cube3.
    Fixture {
        name: Fixture,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// LPS Ramanujan graph X^{p,q}.
    Lps {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Uniform random d-regular graph (configuration model, rejection).
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct GraphInput {
    /// Graph file written by `rcw gen`.
    pub graph: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub input: GraphInput,
    /// Also store the orthonormal eigenvectors (n^2 values).
    #[arg(long)]
    pub vectors: bool,
}

/// `all`, or a number of starts to sample on large graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StartsArg {
    All,
    Sample(usize),
}

fn parse_starts(s: &str) -> Result<StartsArg, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(StartsArg::All);
    }
    match s.parse::<usize>() {
        Ok(0) | Err(_) => Err(format!("expected `all` or a positive count, got `{s}`")),
        Ok(k) => Ok(StartsArg::Sample(k)),
    }
}

#[derive(Debug, Args)]
pub struct StartsOpts {
    /// Start vertices: `all`, or a sample size (used only when n > 2048).
    #[arg(long, value_parser = parse_starts, default_value_t = StartsArg::Sample(DEFAULT_SAMPLE))]
    pub starts: StartsArg,
    /// Seed for sampling starts.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl std::fmt::Display for StartsArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StartsArg::All => f.write_str("all"),
            StartsArg::Sample(k) => write!(f, "{k}"),
        }
    }
}

impl StartsOpts {
    pub fn starts(&self) -> Starts {
        match self.starts {
            StartsArg::All => Starts::All,
            StartsArg::Sample(count) => Starts::Sample {
                count,
                seed: self.seed,
            },
        }
    }
}

#[derive(Debug, Args)]
pub struct MixArgs {
    #[command(flatten)]
    pub input: GraphInput,
    #[arg(long, default_value_t = 0)]
    pub t_min: u32,
    /// Defaults to ceil(2 log_p n) + 2, capped by overflow safety.
    #[arg(long)]
    pub t_max: Option<u32>,
    /// Thresholds for t_mix, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.25")]
    pub eta: Vec<f64>,
    #[command(flatten)]
    pub starts: StartsOpts,
    /// Flat table: t,d_max,d_mean,d2,N_t,lower_bound.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VarianceArgs {
    #[command(flatten)]
    pub input: GraphInput,
    #[arg(long)]
    pub t: u32,
    /// Spectrum file with eigenvectors; computed if absent.
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConjectureArgs {
    #[command(flatten)]
    pub input: GraphInput,
    /// Defaults to floor(2 log_p n).
    #[arg(long)]
    pub t_max: Option<u32>,
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
    /// Flat table: t,W2,Nt,ratio,muR2,kestenR2.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DiameterArgs {
    #[command(flatten)]
    pub input: GraphInput,
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,3")]
    pub xi: Vec<f64>,
    /// Window f for the distance-concentration readout around log_p n.
    #[arg(long)]
    pub f: Option<f64>,
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[command(flatten)]
    pub input: GraphInput,
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,1")]
    pub eta: Vec<f64>,
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
    /// Treat the graph as vertex-transitive even if its file does not say so.
    #[arg(long)]
    pub homogeneous: bool,
    #[command(flatten)]
    pub starts: StartsOpts,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "k4,petersen,heawood,cube3"
    )]
    pub fixtures: Vec<Fixture>,
    /// Also write the table as JSON.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}
