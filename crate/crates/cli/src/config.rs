//! Resolved run configuration. Precedence: flags, then the config file,
//! then defaults.

use std::path::PathBuf;

use assouad::constructions::DEFAULT_POINT_CAP;
use assouad::dimension::{AssouadConfig, BoxConfig};
use assouad::distances::DEFAULT_PAIR_CAP;
use serde::Deserialize;

use crate::args::{Cli, MethodChoice, Sub};
use crate::error::CliError;
use crate::output::read_json;

pub const DEFAULT_THRESHOLD: f64 = 0.85;
pub const DEFAULT_DIRECTIONS: usize = 180;
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Keys accepted in the `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub seed: Option<u64>,
    pub cap_points: Option<usize>,
    pub cap_pairs: Option<usize>,
    pub threshold: Option<f64>,
    pub directions: Option<usize>,
    pub pin_centers: Option<Vec<Vec<f64>>>,
    pub via_projection: Option<bool>,
    #[serde(rename = "box")]
    pub box_config: Option<BoxConfig>,
    pub assouad: Option<AssouadConfig>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Generate { spec: PathBuf, exact: bool },
    Estimate { input: PathBuf, method: MethodChoice },
    DistanceSet { input: PathBuf },
    GapReport { a: f64, b: f64, big_m: usize, window: (f64, f64) },
    ProjectSweep { input: PathBuf, rank: usize },
    SpanningCheck { input: PathBuf, step: Option<f64> },
    TangentZoom { spec: PathBuf },
    VerifyPaper { only: Vec<u8> },
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub out: PathBuf,
    /// `None` uses every core.
    pub workers: Option<usize>,
    pub seed: u64,
    pub cap_points: usize,
    pub cap_pairs: usize,
    pub threshold: f64,
    pub directions: usize,
    pub pin_centers: Vec<Vec<f64>>,
    pub via_projection: bool,
    pub box_config: Option<BoxConfig>,
    pub assouad: Option<AssouadConfig>,
}

impl RunConfig {
    /// Default settings for `command`.
    pub fn new(command: Command) -> Self {
        Self {
            command,
            out: PathBuf::from("out"),
            workers: None,
            seed: DEFAULT_SEED,
            cap_points: DEFAULT_POINT_CAP,
            cap_pairs: DEFAULT_PAIR_CAP,
            threshold: DEFAULT_THRESHOLD,
            directions: DEFAULT_DIRECTIONS,
            pin_centers: Vec::new(),
            via_projection: false,
            box_config: None,
            assouad: None,
        }
    }

    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let file: FileConfig = match &cli.global.config {
            Some(p) => read_json(p)?,
            None => FileConfig::default(),
        };
        let mut threshold_flag = None;
        let mut directions_flag = None;
        let mut pins = Vec::new();
        let mut via_flag = false;
        let command = match cli.command {
            Sub::Generate { spec, exact } => Command::Generate { spec, exact },
            Sub::Estimate {
                input,
                method,
                pin_center,
            } => {
                pins = pin_center;
                Command::Estimate { input, method }
            }
            Sub::DistanceSet { input, via_projection } => {
                via_flag = via_projection;
                Command::DistanceSet { input }
            }
            Sub::GapReport { a, b, big_m, lo, hi } => Command::GapReport {
                a,
                b,
                big_m,
                window: (lo, hi),
            },
            Sub::ProjectSweep {
                input,
                threshold,
                rank,
                directions,
            } => {
                threshold_flag = threshold;
                directions_flag = directions;
                Command::ProjectSweep { input, rank }
            }
            Sub::SpanningCheck { input, step } => Command::SpanningCheck { input, step },
            Sub::TangentZoom { spec } => Command::TangentZoom { spec },
            Sub::VerifyPaper { only } => Command::VerifyPaper { only },
        };
        let d = RunConfig::new(command);
        let g = cli.global;
        let cfg = RunConfig {
            out: g.out.or(file.out).unwrap_or(d.out),
            workers: g.workers.or(file.workers),
            seed: g.seed.or(file.seed).unwrap_or(d.seed),
            cap_points: g.cap_points.or(file.cap_points).unwrap_or(d.cap_points),
            cap_pairs: g.cap_pairs.or(file.cap_pairs).unwrap_or(d.cap_pairs),
            threshold: threshold_flag.or(file.threshold).unwrap_or(d.threshold),
            directions: directions_flag.or(file.directions).unwrap_or(d.directions),
            pin_centers: if pins.is_empty() {
                file.pin_centers.unwrap_or_default()
            } else {
                pins
            },
            via_projection: via_flag || file.via_projection.unwrap_or(false),
            box_config: file.box_config,
            assouad: file.assouad,
            command: d.command,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.cap_points == 0 || self.cap_pairs == 0 {
            return Err(CliError::Config("caps must be positive".into()));
        }
        if self.workers == Some(0) {
            return Err(CliError::Config("workers must be positive".into()));
        }
        if self.directions == 0 {
            return Err(CliError::Config("directions must be positive".into()));
        }
        if !self.threshold.is_finite() {
            return Err(CliError::Config(format!("threshold must be finite, got {}", self.threshold)));
        }
        if let Command::VerifyPaper { only } = &self.command {
            if let Some(c) = only.iter().find(|&&c| !(1..=10).contains(&c)) {
                return Err(CliError::Config(format!("no criterion {c}; valid criteria are 1-10")));
            }
        }
        Ok(())
    }
}
