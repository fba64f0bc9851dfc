use std::path::PathBuf;

use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Compute(#[from] assouad::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn kind(&self) -> &'static str {
        use assouad::Error as E;
        match self {
            CliError::Compute(e) => match e {
                E::DimensionMismatch { .. } => "dimension_mismatch",
                E::EmptyCloud => "empty_cloud",
                E::RaggedPoint { .. } => "ragged_point",
                E::NonFinite(_) => "non_finite",
                E::NotOrthogonal { .. } => "not_orthogonal",
                E::InvalidParameter(_) => "invalid_parameter",
                E::PointCap { .. } => "point_cap",
                E::PairCap { .. } => "pair_cap",
                E::BelowTrustFloor { .. } => "below_trust_floor",
                E::EmptyIntersection(_) => "empty_intersection",
                E::UnsupportedGrassmannian { .. } => "unsupported_grassmannian",
                E::Format { .. } => "format",
                E::Io(_) => "io",
            },
            CliError::Io { .. } => "io",
            CliError::Json { .. } => "json",
            CliError::Config(_) => "config",
        }
    }

    /// `{"error": {"kind": ..., "message": ...}}`.
    pub fn to_json(&self) -> serde_json::Value {
        json!({ "error": { "kind": self.kind(), "message": self.to_string() } })
    }
}
