//! Finite-resolution geometric measure theory: covering counts, box and
//! Assouad dimension estimators, fractal constructions, distance sets,
//! projection sweeps and weak-tangent zoom diagnostics.
//!
//! All geometry is generic over [`Scalar`]; the aliases below fix the common
//! instantiations.

// `!(x > 0)` is how NaN gets rejected alongside non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constructions;
pub mod dimension;
pub mod distances;
pub mod error;
pub mod geom;
pub mod io;
pub mod projections;
pub mod scalar;
pub mod tangents;

pub use error::{Error, Result};
pub use geom::{apply_similarity, hausdorff_distance, window_intersect, PointCloud, SimilarityMap, Window};
pub use scalar::Scalar;

/// Exact rational scalar.
pub type Exact = num_rational::BigRational;

pub type Cloud = PointCloud<f64>;
pub type Cloud32 = PointCloud<f32>;
pub type ExactCloud = PointCloud<Exact>;
pub type Similarity = SimilarityMap<f64>;
pub type ExactSimilarity = SimilarityMap<Exact>;
