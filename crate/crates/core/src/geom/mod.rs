//! Points, similarity maps, windows, and the Hausdorff metric.

mod cloud;
mod hausdorff;
mod similarity;
mod window;

pub use cloud::PointCloud;
pub(crate) use cloud::dist;
pub use hausdorff::hausdorff_distance;
pub use similarity::{apply_similarity, SimilarityMap};
pub use window::{window_intersect, Window};
