//! Covering numbers and dimension estimators.

mod covering;
mod estimate;
mod formulas;

pub use covering::{covering_count, covering_count_with_guard, CoveringProfile, ProfileEntry, DEFAULT_GUARD};
pub use estimate::{
    assouad_estimate, box_dimension, AssouadConfig, BoxConfig, Diagnostics, DimensionEstimate, Localization, Method,
    Probe,
};
pub use formulas::{
    exception_bound, falconer_erdogan_bound, falconer_erdogan_subcritical, falconer_erdogan_threshold,
    similarity_dimension, similarity_dimension_ln,
};
