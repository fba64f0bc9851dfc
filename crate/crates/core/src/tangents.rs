//! Zoom sequences and weak-tangent diagnostics.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::{example_1_4, example_1_4_skeleton, MapSpec};
use crate::distances::distance_set;
use crate::error::{invalid, Error, Result};
use crate::geom::{apply_similarity, hausdorff_distance, window_intersect, PointCloud, SimilarityMap, Window};
use crate::scalar::{two_pow, Scalar};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CustomZoom {
    pub k: usize,
    pub map: MapSpec,
}

/// How the `k`-th similarity of a zoom sequence is built.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "camelCase")]
pub enum ZoomRule {
    /// `T_k(x) = k⁻¹ 4^k (x - 2^-k)`.
    Example14,
    /// `T_k(x) = base^k (x - center)`; the center defaults to the origin.
    PowerScale {
        base: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<Vec<f64>>,
    },
    /// Explicit maps, one per `k`.
    Custom { table: Vec<CustomZoom> },
}

impl ZoomRule {
    pub fn map<T: Scalar>(&self, k: usize, dim: usize) -> Result<SimilarityMap<T>> {
        match self {
            ZoomRule::Example14 => {
                if k == 0 || dim != 1 {
                    return Err(invalid("the example14 rule needs k >= 1 on the line"));
                }
                let c = two_pow::<T>(2 * k as i32) / T::from_int(k as i64);
                Ok(SimilarityMap::zoom_about(&[two_pow::<T>(-(k as i32))], c))
            }
            ZoomRule::PowerScale { base, center } => {
                if !(*base > 0.0) {
                    return Err(invalid(format!("zoom base must be > 0, got {base}")));
                }
                let center: Vec<T> = match center {
                    Some(c) if c.len() == dim => c.iter().map(|&x| T::from_f64_lossy(x)).collect(),
                    Some(c) => {
                        return Err(Error::DimensionMismatch {
                            left: c.len(),
                            right: dim,
                        })
                    }
                    None => vec![T::zero(); dim],
                };
                let c = T::from_f64_lossy(*base).pow_int(k as i32);
                Ok(SimilarityMap::zoom_about(&center, c))
            }
            ZoomRule::Custom { table } => table
                .iter()
                .find(|e| e.k == k)
                .ok_or_else(|| invalid(format!("custom zoom table has no map for k = {k}")))?
                .map
                .build(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZoomSequence<T> {
    pub rule: ZoomRule,
    pub window: Window<T>,
    /// Inclusive.
    pub k_range: (usize, usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZoomFrame<T: Scalar> {
    pub k: usize,
    pub cloud: PointCloud<T>,
}

/// `T_k(F) ∩ X` for every `k` in range. Empty frames are skipped with a
/// warning; an all-empty sequence is an error.
pub fn zoom<T: Scalar>(f: &PointCloud<T>, z: &ZoomSequence<T>) -> Result<Vec<ZoomFrame<T>>> {
    f.check_dim(z.window.dim())?;
    let (k0, k1) = z.k_range;
    if k0 > k1 {
        return Err(invalid(format!("empty k range {k0}..={k1}")));
    }
    let frames = (k0..=k1)
        .into_par_iter()
        .map(|k| {
            let map = z.rule.map::<T>(k, f.dim())?;
            let img = apply_similarity(&map, f)?;
            Ok(window_intersect(&img, &z.window)?.map(|cloud| ZoomFrame { k, cloud }))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::with_capacity(frames.len());
    for (k, frame) in (k0..=k1).zip(frames) {
        match frame {
            Some(fr) => out.push(fr),
            None => log::warn!("zoom frame k = {k} misses the window; skipped"),
        }
    }
    if out.is_empty() {
        return Err(Error::EmptyIntersection(format!(
            "every zoom frame for k in {k0}..={k1} misses the window"
        )));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub k: usize,
    pub distance: f64,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTrace {
    /// Sorted by `k`.
    pub rows: Vec<TraceRow>,
    pub candidate: Vec<Vec<f64>>,
}

/// Hausdorff distance from each frame to `candidate`. Nothing about
/// monotonicity is assumed.
pub fn convergence_trace<T: Scalar>(seq: &[ZoomFrame<T>], candidate: &PointCloud<T>) -> Result<ConvergenceTrace> {
    let mut rows = seq
        .par_iter()
        .map(|fr| {
            Ok(TraceRow {
                k: fr.k,
                distance: hausdorff_distance(&fr.cloud, candidate)?.lossy(),
                points: fr.cloud.len(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| r.k);
    Ok(ConvergenceTrace {
        rows,
        candidate: candidate.points().map(|p| p.iter().map(|x| x.lossy()).collect()).collect(),
    })
}

/// `{l/k : 0 ≤ l ≤ k}`.
pub fn uniform_grid<T: Scalar>(k: usize) -> Result<PointCloud<T>> {
    if k == 0 {
        return Err(invalid("grid needs k >= 1"));
    }
    PointCloud::from_values((0..=k).map(|l| T::ratio(l as i64, k as i64)).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub c: f64,
    /// `min{k ≥ 1 : c 2^-k ≤ 1}`.
    pub m: usize,
    /// `d_H(S(F) ∩ B(0,1), S(F₀) ∩ B(0,1))` on the truncations.
    pub distance: f64,
    /// `c m 4^-m`.
    pub sup_bound: f64,
    /// `m 2^-m`.
    pub bound: f64,
    /// Slack for the clusters beyond `kmax`.
    pub truncation: f64,
    pub holds: bool,
}

fn first_k_below_one<T: Scalar>(c: &T) -> usize {
    let mut k = 1;
    while c.clone() * two_pow::<T>(-(k as i32)) > T::one() {
        k += 1;
    }
    k
}

/// Zooms at the origin of the dyadic-cluster set `F` and its skeleton `F₀`
/// by `x ↦ c x` and compares the two inside `B(0,1)` with the bound
/// `c m 4^-m ≤ m 2^-m`.
pub fn tangent_comparison_1_4<T: Scalar>(kmax: usize, scales: &[f64]) -> Result<Vec<ComparisonRow>> {
    if kmax < 4 {
        return Err(invalid(format!("kmax must be >= 4, got {kmax}")));
    }
    if scales.is_empty() {
        return Err(invalid("no zoom scales"));
    }
    if let Some(&c) = scales.iter().find(|&&c| !(c > 1.0)) {
        return Err(invalid(format!("zoom scales must exceed 1, got {c}")));
    }
    if scales.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("zoom scales must be increasing"));
    }
    let f: PointCloud<T> = example_1_4(kmax)?;
    let f0: PointCloud<T> = example_1_4_skeleton(kmax)?;
    let ball = Window::ball(vec![T::zero()], T::one())?;
    let truncation = two_pow::<f64>(-(kmax as i32));
    scales
        .par_iter()
        .map(|&c_f| {
            let c = T::from_f64_lossy(c_f);
            let m = first_k_below_one(&c);
            let s = SimilarityMap::scaling(1, c.clone());
            let a = window_intersect(&apply_similarity(&s, &f)?, &ball)?;
            let b = window_intersect(&apply_similarity(&s, &f0)?, &ball)?;
            // Both contain 0.
            let (a, b) = (a.expect("0 is in F"), b.expect("0 is in F0"));
            let distance = hausdorff_distance(&a, &b)?.lossy();
            let sup_bound = (c * T::from_int(m as i64) * two_pow::<T>(-2 * m as i32)).lossy();
            let bound = m as f64 * two_pow::<f64>(-(m as i32));
            Ok(ComparisonRow {
                c: c_f,
                m,
                distance,
                sup_bound,
                bound,
                truncation,
                holds: distance <= bound + truncation,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScaledWindow<T: Scalar> {
    pub c: T,
    pub cloud: PointCloud<T>,
}

/// `c D(F) ∩ [0, span]` for each `c`.
pub fn scaled_distance_window<T: Scalar>(
    f: &PointCloud<T>,
    scales: &[T],
    span: &T,
    pair_cap: usize,
) -> Result<Vec<ScaledWindow<T>>> {
    if !(*span > T::zero()) {
        return Err(invalid(format!("span must be > 0, got {span}")));
    }
    if let Some(c) = scales.iter().find(|c| !(**c > T::zero())) {
        return Err(invalid(format!("scales must be > 0, got {c}")));
    }
    let d = distance_set(f, pair_cap)?;
    let window = Window::cube(vec![T::zero()], span.clone())?;
    let mut out = Vec::with_capacity(scales.len());
    for c in scales {
        let img = apply_similarity(&SimilarityMap::scaling(1, c.clone()), &d)?;
        match window_intersect(&img, &window)? {
            Some(cloud) => out.push(ScaledWindow { c: c.clone(), cloud }),
            None => log::warn!("scaled distance window for c = {c} is empty; skipped"),
        }
    }
    Ok(out)
}
