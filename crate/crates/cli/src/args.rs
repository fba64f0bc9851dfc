use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "assouad", version, about = "Fractal dimension pipelines and reproduction suite")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Default, Args)]
pub struct GlobalArgs {
    /// JSON config file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory [default: out].
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads [default: all cores].
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Seed for the randomized property checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub cap_points: Option<usize>,
    #[arg(long, global = true)]
    pub cap_pairs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    Box,
    Assouad,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Build a cloud from a construction spec (JSON) and write it as CSV.
    Generate {
        #[arg(long)]
        spec: PathBuf,
        /// Construct in exact rational arithmetic before writing.
        #[arg(long)]
        exact: bool,
    },
    /// Box and Assouad dimension estimates of a cloud.
    Estimate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodChoice::Both)]
        method: MethodChoice,
        /// Extra Assouad center, comma-separated coordinates.
        #[arg(long = "pin-center", value_parser = parse_point, allow_hyphen_values = true)]
        pin_center: Vec<Vec<f64>>,
    },
    /// Distance set of a cloud.
    DistanceSet {
        #[arg(long)]
        input: PathBuf,
        /// Go through the product cloud and the difference projection.
        #[arg(long)]
        via_projection: bool,
    },
    /// Largest gap of the lattice `m ln a + n ln b` inside a window.
    GapReport {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long = "m", default_value_t = 300)]
        big_m: usize,
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, default_value_t = -0.01, allow_hyphen_values = true)]
        hi: f64,
    },
    /// Assouad estimates of the projections onto sampled subspaces.
    ProjectSweep {
        #[arg(long)]
        input: PathBuf,
        /// Flag directions estimating below this [default: 0.85].
        #[arg(long)]
        threshold: Option<f64>,
        /// Subspace dimension.
        #[arg(long, default_value_t = 1)]
        rank: usize,
        /// Number of sampled subspaces [default: 180].
        #[arg(long)]
        directions: Option<usize>,
    },
    /// `det[φ, φ', φ'']` along a sampled curve on the sphere (CSV `t,x,y,z`).
    SpanningCheck {
        #[arg(long)]
        input: PathBuf,
        /// Difference step; rounded to a multiple of the sample spacing.
        #[arg(long)]
        step: Option<f64>,
    },
    /// Zoom a construction and trace the distance to a candidate tangent.
    TangentZoom {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Run the reproduction suite.
    VerifyPaper {
        /// Restrict to these criteria (1-10).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

pub fn parse_point(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("bad coordinate `{t}`: {e}")))
        .collect()
}
