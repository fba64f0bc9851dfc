use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::covering::{cell_ids, cell_side, check_floor, CoveringProfile, ProfileEntry, DEFAULT_GUARD};
use crate::error::{invalid, Result};
use crate::geom::PointCloud;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Box,
    Assouad,
    Similarity,
}

/// A localization `B(x, R)` used by the Assouad estimator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Localization {
    pub center: Vec<f64>,
    pub big_r: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Fitted value before clamping to `[0, d]`.
    pub raw_value: f64,
    /// Largest absolute residual of the log-log fit (box) or of any
    /// per-localization fit (Assouad).
    pub max_residual: f64,
    /// Max minus min of the per-localization exponents.
    pub exponent_spread: f64,
    /// Every count was equal, so no slope could be observed.
    pub degenerate: bool,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmax: Option<Localization>,
    /// `(r, N_r)` pairs of a box fit.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub scale_counts: Vec<(f64, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<CoveringProfile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionEstimate {
    pub value: f64,
    pub method: Method,
    pub scale_window: (f64, f64),
    pub diagnostics: Diagnostics,
}

/// Least-squares line `y = a + b x`; returns `(b, max |residual|)`.
pub(crate) fn fit_slope(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let a = my - b * mx;
    let res = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - a - b * x).abs())
        .fold(0.0, f64::max);
    (b, res)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxConfig {
    pub r_min: f64,
    pub r_max: f64,
    pub levels: usize,
    pub guard: f64,
}

impl BoxConfig {
    pub fn new(r_min: f64, r_max: f64, levels: usize) -> Self {
        Self {
            r_min,
            r_max,
            levels,
            guard: DEFAULT_GUARD,
        }
    }

    /// Window from the trust floor (or `extent · 2^-12` when the cloud is
    /// exact) up to a quarter of the extent.
    pub fn auto<T: Scalar>(f: &PointCloud<T>) -> Self {
        let extent = f.extent().lossy();
        let (r_min, r_max) = auto_range(extent, f.resolution().lossy() * DEFAULT_GUARD, 4.0, 10.0);
        let levels = ((r_max / r_min).log2().round() as usize + 1).clamp(3, 16);
        Self::new(r_min, r_max, levels)
    }
}

/// `[lo, hi]` with `hi = extent / top_div` and `lo` at the floor, at most
/// `2^-max_octaves · hi` below `hi`. Falls back to `[1/2, 1]` on a point.
fn auto_range(extent: f64, floor: f64, top_div: f64, max_octaves: f64) -> (f64, f64) {
    if !(extent > 0.0) {
        return (0.5, 1.0);
    }
    let hi = extent / top_div;
    let lo = floor.max(hi * (-max_octaves).exp2());
    if lo >= hi {
        (hi / 2.0, hi)
    } else {
        (lo, hi)
    }
}

/// Upper bound for the diameter used to validate `r_max`.
fn diameter_bound<T: Scalar>(f: &PointCloud<T>) -> f64 {
    if f.dim() == 1 {
        f.diameter().lossy()
    } else {
        f.extent().lossy() * (f.dim() as f64).sqrt()
    }
}

fn degenerate(method: Method, window: (f64, f64), samples: usize) -> DimensionEstimate {
    DimensionEstimate {
        value: 0.0,
        method,
        scale_window: window,
        diagnostics: Diagnostics {
            degenerate: true,
            samples,
            ..Diagnostics::default()
        },
    }
}

/// Slope of `log N_r` against `log(1/r)` over `levels` geometrically spaced
/// scales in `[r_min, r_max]`.
pub fn box_dimension<T: Scalar>(f: &PointCloud<T>, cfg: &BoxConfig) -> Result<DimensionEstimate> {
    let BoxConfig {
        r_min,
        r_max,
        levels,
        guard,
    } = *cfg;
    if levels < 3 {
        return Err(invalid(format!("box dimension needs at least 3 levels, got {levels}")));
    }
    if !(r_min > 0.0 && r_min < r_max && r_max.is_finite()) {
        return Err(invalid(format!("need 0 < r_min < r_max, got [{r_min}, {r_max}]")));
    }
    check_floor(f, &T::from_f64_lossy(r_min), guard)?;
    let window = (r_min, r_max);
    if f.len() == 1 {
        return Ok(degenerate(Method::Box, window, levels));
    }
    let diam = diameter_bound(f);
    if r_max > diam * (1.0 + 1e-9) {
        return Err(invalid(format!("r_max = {r_max} exceeds the diameter bound {diam}")));
    }

    let step = (r_max / r_min).ln() / (levels - 1) as f64;
    let scales: Vec<f64> = (0..levels)
        .map(|i| match i {
            0 => r_min,
            i if i == levels - 1 => r_max,
            i => r_min * (step * i as f64).exp(),
        })
        .collect();
    let counts: Vec<usize> = scales
        .par_iter()
        .map(|&r| cell_ids(f, &cell_side(&T::from_f64_lossy(r), f.dim())).1)
        .collect();
    let scale_counts: Vec<(f64, usize)> = scales.iter().copied().zip(counts.iter().copied()).collect();
    if counts.iter().all(|&c| c == counts[0]) {
        let mut est = degenerate(Method::Box, window, levels);
        est.diagnostics.scale_counts = scale_counts;
        return Ok(est);
    }
    let xs: Vec<f64> = scales.iter().map(|r| -r.ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|&c| (c as f64).ln()).collect();
    let (slope, residual) = fit_slope(&xs, &ys);
    Ok(DimensionEstimate {
        value: slope.clamp(0.0, f.dim() as f64),
        method: Method::Box,
        scale_window: window,
        diagnostics: Diagnostics {
            raw_value: slope,
            max_residual: residual,
            samples: levels,
            scale_counts,
            ..Diagnostics::default()
        },
    })
}

/// A localization with its own scales, e.g. a cluster point together with
/// the radius at which its structure is visible.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub center: Vec<f64>,
    pub big_r: f64,
    pub ratios: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AssouadConfig {
    /// Outer radii `R`.
    pub big_scales: Vec<f64>,
    /// Ratios `R / r`, each > 1.
    pub ratios: Vec<f64>,
    /// Size of the stratified center sample drawn from the cloud.
    pub max_centers: usize,
    /// Extra centers, snapped to the nearest cloud point.
    pub pinned: Vec<Vec<f64>>,
    pub probes: Vec<Probe>,
    /// Drop the origin from the stratified sample.
    pub exclude_origin: bool,
    pub guard: f64,
    pub keep_profile: bool,
}

impl Default for AssouadConfig {
    fn default() -> Self {
        Self {
            big_scales: Vec::new(),
            ratios: Vec::new(),
            max_centers: 512,
            pinned: Vec::new(),
            probes: Vec::new(),
            exclude_origin: false,
            guard: DEFAULT_GUARD,
            keep_profile: false,
        }
    }
}

impl AssouadConfig {
    pub fn new(big_scales: Vec<f64>, ratios: Vec<f64>) -> Self {
        Self {
            big_scales,
            ratios,
            ..Self::default()
        }
    }

    /// Dyadic scales: `R = extent · 2^-j` for up to three `j` and ratios
    /// `2, 4, ..., 2^m` with `m ≤ 10`, as long as every `r` clears the trust
    /// floor. Long ratio ranges come first: short fits overshoot.
    pub fn auto<T: Scalar>(f: &PointCloud<T>) -> Self {
        let extent = f.extent().lossy();
        let (lo, hi) = auto_range(extent, f.resolution().lossy() * DEFAULT_GUARD, 2.0, 12.0);
        let octaves = ((hi / lo).log2().floor() as i32).max(1);
        let ratio_octaves = octaves.min(10);
        let scale_count = (octaves - ratio_octaves + 1).clamp(1, 3);
        let big_scales = (0..scale_count).map(|j| hi * (-j as f64).exp2()).collect();
        let ratios = (1..=ratio_octaves).map(|j| (j as f64).exp2()).collect();
        Self::new(big_scales, ratios)
    }

    pub fn with_max_centers(mut self, n: usize) -> Self {
        self.max_centers = n;
        self
    }

    pub fn with_pinned(mut self, centers: Vec<Vec<f64>>) -> Self {
        self.pinned = centers;
        self
    }

    pub fn with_probes(mut self, probes: Vec<Probe>) -> Self {
        self.probes = probes;
        self
    }
}

struct Task<T: Scalar> {
    center: usize,
    big_r: T,
    /// Indices into the shared table of small scales.
    scales: Vec<usize>,
    ratios: Vec<f64>,
}

struct Outcome {
    exponent: f64,
    residual: f64,
    counts: Vec<usize>,
    constant: bool,
}

fn stratified_centers<T: Scalar>(f: &PointCloud<T>, cfg: &AssouadConfig) -> Result<Vec<usize>> {
    let n = f.len();
    let m = cfg.max_centers.min(n);
    let mut idx: Vec<usize> = (0..m).map(|i| i * n / m).collect();
    if cfg.exclude_origin {
        idx.retain(|&i| !f.point(i).iter().all(|x| x.is_zero()));
    }
    for c in &cfg.pinned {
        f.check_dim(c.len())?;
        let target: Vec<T> = c.iter().map(|&x| T::from_f64_lossy(x)).collect();
        idx.push(f.nearest_index(&target));
    }
    idx.sort_unstable();
    idx.dedup();
    Ok(idx)
}

/// Members of the closed ball `B(f[center], R)`: an index range in one
/// dimension, an explicit list otherwise.
fn ball<T: Scalar>(f: &PointCloud<T>, center: usize, big_r: &T) -> (usize, usize, Option<Vec<usize>>) {
    let c = f.point(center);
    if f.dim() > 1 {
        return (0, 0, Some(f.ball_indices(c, big_r)));
    }
    let (s, e) = f.first_axis_range(&(c[0].clone() - big_r.clone()), &(c[0].clone() + big_r.clone()));
    (s, e, None)
}

/// Largest fitted two-scale exponent `log N_r(B(x,R) ∩ F) / log(R/r)` over
/// sampled centers `x ∈ F` and scale pairs.
///
/// With a single ratio the exponent is `log N / log(R/r)`; with several it is
/// the least-squares slope. Ties are broken toward the lexicographically
/// smallest `(x, R)`, so the result does not depend on the thread count.
pub fn assouad_estimate<T: Scalar>(f: &PointCloud<T>, cfg: &AssouadConfig) -> Result<DimensionEstimate> {
    let d = f.dim();
    let centers = stratified_centers(f, cfg)?;
    for p in &cfg.probes {
        f.check_dim(p.center.len())?;
    }
    if centers.is_empty() && cfg.probes.is_empty() {
        return Err(invalid("no centers to sample"));
    }
    if !centers.is_empty() && (cfg.big_scales.is_empty() || cfg.ratios.is_empty()) {
        return Err(invalid("big_scales and ratios must be non-empty"));
    }

    // Shared small scales r = R / ratio, each labelled once.
    let mut small: Vec<T> = Vec::new();
    let mut intern = |r: T| -> usize {
        match small.iter().position(|s| *s == r) {
            Some(i) => i,
            None => {
                small.push(r);
                small.len() - 1
            }
        }
    };
    let mut tasks: Vec<Task<T>> = Vec::new();
    let push_task = |center: usize, big_r: f64, ratios: &[f64], intern: &mut dyn FnMut(T) -> usize| -> Result<Task<T>> {
        if !(big_r > 0.0) || !big_r.is_finite() {
            return Err(invalid(format!("outer radius must be > 0, got {big_r}")));
        }
        if ratios.is_empty() {
            return Err(invalid("every localization needs at least one ratio"));
        }
        let big = T::from_f64_lossy(big_r);
        let mut scales = Vec::with_capacity(ratios.len());
        for &q in ratios {
            if !(q > 1.0) || !q.is_finite() {
                return Err(invalid(format!("ratios R/r must exceed 1, got {q}")));
            }
            let r = big.clone() / T::from_f64_lossy(q);
            check_floor(f, &r, cfg.guard)?;
            scales.push(intern(r));
        }
        Ok(Task {
            center,
            big_r: big,
            scales,
            ratios: ratios.to_vec(),
        })
    };
    let mut sorted_scales = cfg.big_scales.clone();
    sorted_scales.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    for &c in &centers {
        for &big_r in &sorted_scales {
            tasks.push(push_task(c, big_r, &cfg.ratios, &mut intern)?);
        }
    }
    for p in &cfg.probes {
        let target: Vec<T> = p.center.iter().map(|&x| T::from_f64_lossy(x)).collect();
        let c = f.nearest_index(&target);
        tasks.push(push_task(c, p.big_r, &p.ratios, &mut intern)?);
    }

    let labels: Vec<(Vec<u32>, usize)> = small.par_iter().map(|r| cell_ids(f, &cell_side(r, d))).collect();
    let max_cells = labels.iter().map(|l| l.1).max().unwrap_or(0);

    let outcomes: Vec<Outcome> = tasks
        .par_iter()
        .map_init(
            || (vec![0u32; max_cells], 0u32),
            |(stamps, epoch), task| {
                let (s, e, members) = ball(f, task.center, &task.big_r);
                let counts: Vec<usize> = task
                    .scales
                    .iter()
                    .map(|&si| {
                        let ids = &labels[si].0;
                        match &members {
                            None => (ids[e - 1] - ids[s] + 1) as usize,
                            Some(m) => {
                                if *epoch == u32::MAX {
                                    stamps.fill(0);
                                    *epoch = 0;
                                }
                                *epoch += 1;
                                let mut n = 0;
                                for &i in m {
                                    let id = ids[i] as usize;
                                    if stamps[id] != *epoch {
                                        stamps[id] = *epoch;
                                        n += 1;
                                    }
                                }
                                n
                            }
                        }
                    })
                    .collect();
                // A lone ratio still carries an exponent unless the ball is a point.
                let constant = if counts.len() == 1 {
                    counts[0] == 1
                } else {
                    counts.iter().all(|&c| c == counts[0])
                };
                let ys: Vec<f64> = counts.iter().map(|&c| (c as f64).ln()).collect();
                let xs: Vec<f64> = task.ratios.iter().map(|q| q.ln()).collect();
                let (exponent, residual) = if xs.len() == 1 {
                    (ys[0] / xs[0], 0.0)
                } else {
                    fit_slope(&xs, &ys)
                };
                Outcome {
                    exponent,
                    residual,
                    counts,
                    constant,
                }
            },
        )
        .collect();

    let mut best = 0usize;
    for (i, o) in outcomes.iter().enumerate().skip(1) {
        let cur = &outcomes[best];
        let better = match o.exponent.partial_cmp(&cur.exponent) {
            Some(Ordering::Greater) => true,
            Some(Ordering::Equal) => {
                let (a, b) = (&tasks[i], &tasks[best]);
                (a.center, &a.big_r) < (b.center, &b.big_r)
            }
            _ => false,
        };
        if better {
            best = i;
        }
    }
    let raw = outcomes[best].exponent;
    let lowest = outcomes.iter().map(|o| o.exponent).fold(f64::INFINITY, f64::min);
    let residual = outcomes.iter().map(|o| o.residual).fold(0.0, f64::max);
    let all_constant = outcomes.iter().all(|o| o.constant);

    let r_min = small.iter().map(|r| r.lossy()).fold(f64::INFINITY, f64::min);
    let r_max = tasks.iter().map(|t| t.big_r.lossy()).fold(0.0, f64::max);

    let small_f64: Vec<f64> = small.iter().map(|r| r.lossy()).collect();
    let profile = cfg.keep_profile.then(|| CoveringProfile {
        entries: tasks
            .iter()
            .zip(&outcomes)
            .flat_map(|(t, o)| {
                let small = &small_f64;
                let center: Vec<f64> = f.point(t.center).iter().map(|x| x.lossy()).collect();
                let big_r = t.big_r.lossy();
                t.scales.iter().zip(&o.counts).map(move |(&si, &count)| ProfileEntry {
                    center: center.clone(),
                    big_r,
                    r: small[si],
                    count,
                })
            })
            .collect(),
        source_resolution: f.resolution().lossy(),
        guard: cfg.guard,
    });
    Ok(DimensionEstimate {
        value: if all_constant { 0.0 } else { raw.clamp(0.0, d as f64) },
        method: Method::Assouad,
        scale_window: (r_min, r_max),
        diagnostics: Diagnostics {
            raw_value: raw,
            max_residual: residual,
            exponent_spread: raw - lowest,
            degenerate: all_constant,
            samples: tasks.len(),
            argmax: Some(Localization {
                center: f.point(tasks[best].center).iter().map(|x| x.lossy()).collect(),
                big_r: tasks[best].big_r.lossy(),
            }),
            scale_counts: Vec::new(),
            profile,
        },
    })
}
