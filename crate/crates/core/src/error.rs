use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("point cloud must contain at least one point")]
    EmptyCloud,

    #[error("point {index} has {found} coordinates, expected {expected}")]
    RaggedPoint {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("non-finite coordinate in point {0}")]
    NonFinite(usize),

    #[error("matrix is not orthogonal: |OᵀO - I| entry {deviation:e} exceeds tolerance")]
    NotOrthogonal { deviation: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("projected point count {projected} exceeds cap {cap}")]
    PointCap { projected: u128, cap: usize },

    #[error("projected pair count {projected} exceeds cap {cap}")]
    PairCap { projected: u128, cap: usize },

    #[error("scale {r:e} is below the trust floor {floor:e} (guard x resolution)")]
    BelowTrustFloor { r: f64, floor: f64 },

    #[error("empty intersection: {0}")]
    EmptyIntersection(String),

    #[error("unsupported Grassmannian G({d},{k}); supported: G(2,1), G(3,1), G(3,2)")]
    UnsupportedGrassmannian { d: usize, k: usize },

    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
