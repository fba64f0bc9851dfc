//! Orthogonal projections onto lines and planes, direction sweeps, and the
//! curve spanning check.

use std::cmp::Ordering;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dimension::{assouad_estimate, AssouadConfig, DimensionEstimate};
use crate::error::{invalid, Error, Result};
use crate::geom::PointCloud;
use crate::scalar::Scalar;

/// A `k`-plane through the origin of `ℝ^d`, given by an orthonormal frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Subspace {
    pub ambient: usize,
    pub rank: usize,
    pub frame: Vec<Vec<f64>>,
    /// Sampling parameters (an angle in the plane; height and azimuth of
    /// the generating unit vector in space).
    pub parameter: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn cross(a: &[f64], b: &[f64]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

impl Subspace {
    pub fn new(frame: Vec<Vec<f64>>, parameter: Vec<f64>) -> Result<Self> {
        let rank = frame.len();
        let ambient = frame.first().map_or(0, Vec::len);
        if rank == 0 || rank >= ambient {
            return Err(invalid(format!("need 1 <= k < d, got k = {rank}, d = {ambient}")));
        }
        if frame.iter().any(|v| v.len() != ambient) {
            return Err(invalid("frame vectors have different lengths"));
        }
        let mut worst: f64 = 0.0;
        for i in 0..rank {
            for j in 0..rank {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot(&frame[i], &frame[j]) - target).abs());
            }
        }
        if worst > 1e-10 {
            return Err(Error::NotOrthogonal { deviation: worst });
        }
        Ok(Self {
            ambient,
            rank,
            frame,
            parameter,
        })
    }

    /// The line spanned by the unit vector at angle `theta` in the plane.
    pub fn line_at_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            ambient: 2,
            rank: 1,
            frame: vec![vec![c, s]],
            parameter: vec![theta],
        }
    }

    /// Unit normal of a plane in `ℝ³`.
    pub fn normal(&self) -> Option<[f64; 3]> {
        (self.ambient == 3 && self.rank == 2).then(|| cross(&self.frame[0], &self.frame[1]))
    }
}

/// Orthonormal basis of `v^⊥` for a unit `v ∈ ℝ³`, oriented so that
/// `u₁ × u₂ = v`.
fn complement(v: [f64; 3]) -> (Vec<f64>, Vec<f64>) {
    let axis = (0..3)
        .min_by(|&i, &j| v[i].abs().partial_cmp(&v[j].abs()).unwrap_or(Ordering::Equal))
        .unwrap_or(0);
    let mut e = [0.0; 3];
    e[axis] = 1.0;
    let p = dot(&e, &v);
    let mut u1: Vec<f64> = (0..3).map(|i| e[i] - p * v[i]).collect();
    let n = dot(&u1, &u1).sqrt();
    u1.iter_mut().for_each(|x| *x /= n);
    let u2 = cross(&v, &u1).to_vec();
    (u1, u2)
}

/// Deterministic quasi-uniform sample of `n` subspaces:
/// angles `iπ/n` on `G(2,1)`, a Fibonacci sphere on `G(3,1)` and its
/// orthogonal complements on `G(3,2)`.
pub fn sample_directions(d: usize, k: usize, n: usize) -> Result<Vec<Subspace>> {
    if n == 0 {
        return Err(invalid("need at least one direction"));
    }
    match (d, k) {
        (2, 1) => Ok((0..n)
            .map(|i| {
                let mut s = Subspace::line_at_angle(i as f64 * PI / n as f64);
                if 2 * i == n {
                    s.frame = vec![vec![0.0, 1.0]];
                }
                s
            })
            .collect()),
        (3, 1) => Ok(fibonacci_sphere(n)
            .into_iter()
            .map(|(v, param)| Subspace {
                ambient: 3,
                rank: 1,
                frame: vec![v.to_vec()],
                parameter: param.to_vec(),
            })
            .collect()),
        (3, 2) => Ok(fibonacci_sphere(n)
            .into_iter()
            .map(|(v, param)| {
                let (u1, u2) = complement(v);
                Subspace {
                    ambient: 3,
                    rank: 2,
                    frame: vec![u1, u2],
                    parameter: param.to_vec(),
                }
            })
            .collect()),
        _ => Err(Error::UnsupportedGrassmannian { d, k }),
    }
}

/// Unit vectors `(r cos φ, r sin φ, z)` with `z` equispaced and `φ` advancing
/// by the golden angle; returns each vector with its `(z, φ)`.
fn fibonacci_sphere(n: usize) -> Vec<([f64; 3], [f64; 2])> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2 * i + 1) as f64 / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = (i as f64 * golden).rem_euclid(2.0 * PI);
            let (s, c) = phi.sin_cos();
            ([r * c, r * s, z], [z, phi])
        })
        .collect()
}

/// Frame coordinates `(⟨x, u₁⟩, ..., ⟨x, u_k⟩)` of every point; the
/// resolution is kept since projections are 1-Lipschitz.
pub fn project<T: Scalar>(f: &PointCloud<T>, v: &Subspace) -> Result<PointCloud<T>> {
    f.check_dim(v.ambient)?;
    let frame: Vec<Vec<T>> = v
        .frame
        .iter()
        .map(|u| u.iter().map(|&x| T::from_f64_lossy(x)).collect())
        .collect();
    let mut flat = Vec::with_capacity(f.len() * v.rank);
    for p in f.points() {
        for u in &frame {
            flat.push(
                p.iter()
                    .zip(u)
                    .fold(T::zero(), |acc, (x, w)| acc + x.clone() * w.clone()),
            );
        }
    }
    PointCloud::from_flat(v.rank, flat, f.resolution().clone())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub parameter: Vec<f64>,
    pub estimate: DimensionEstimate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub threshold: f64,
    /// Row indices whose estimate is below the threshold.
    pub flagged: Vec<usize>,
    pub min: f64,
    pub median: f64,
    pub flagged_fraction: f64,
}

/// Assouad estimate of every projection; `cfg = None` picks
/// [`AssouadConfig::auto`] per projected cloud. Per-localization profiles are
/// dropped from the rows.
pub fn projection_sweep<T: Scalar>(
    f: &PointCloud<T>,
    dirs: &[Subspace],
    cfg: Option<&AssouadConfig>,
    threshold: f64,
) -> Result<SweepReport> {
    if dirs.is_empty() {
        return Err(invalid("no directions to sweep"));
    }
    let rows = dirs
        .par_iter()
        .map(|v| {
            let p = project(f, v)?;
            let mut est = match cfg {
                Some(c) => assouad_estimate(&p, c)?,
                None => assouad_estimate(&p, &AssouadConfig::auto(&p))?,
            };
            est.diagnostics.profile = None;
            Ok(SweepRow {
                parameter: v.parameter.clone(),
                estimate: est,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = rows.iter().map(|r| r.estimate.value).collect();
    let flagged: Vec<usize> = (0..values.len()).filter(|&i| values[i] < threshold).collect();
    let mut sorted = values.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    let n = sorted.len();
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    };
    Ok(SweepReport {
        threshold,
        flagged_fraction: flagged.len() as f64 / n as f64,
        flagged,
        min: sorted[0],
        median,
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpanningRow {
    pub t: f64,
    pub det: f64,
    pub spans: bool,
}

/// Failure threshold for `|det[φ, φ′, φ″]|`.
pub const SPANNING_TOLERANCE: f64 = 1e-6;

/// Samples `phi` at `n` equispaced parameters `t_i = (i + 1)/(n + 1)`.
pub fn sample_curve(phi: impl Fn(f64) -> [f64; 3], n: usize) -> Vec<(f64, [f64; 3])> {
    (0..n)
        .map(|i| {
            let t = (i + 1) as f64 / (n + 1) as f64;
            (t, phi(t))
        })
        .collect()
}

/// `det[φ, φ′, φ″]` at interior samples, with derivatives from central
/// differences of step `step` (rounded to a multiple of the sample spacing;
/// defaults to the spacing).
pub fn spanning_check(samples: &[(f64, [f64; 3])], step: Option<f64>) -> Result<Vec<SpanningRow>> {
    let n = samples.len();
    if n < 5 {
        return Err(invalid(format!("need at least 5 samples, got {n}")));
    }
    let h = samples[1].0 - samples[0].0;
    if !(h > 0.0) {
        return Err(invalid("samples must have increasing parameters"));
    }
    for (i, w) in samples.windows(2).enumerate() {
        if ((w[1].0 - w[0].0) - h).abs() > 1e-9 * h.max(1.0) {
            return Err(invalid(format!("samples are not equispaced at index {}", i + 1)));
        }
    }
    for (i, (t, p)) in samples.iter().enumerate() {
        if !(0.0..=1.0).contains(t) {
            return Err(invalid(format!("sample {i} has parameter {t} outside (0,1)")));
        }
        let norm = dot(p, p).sqrt();
        if (norm - 1.0).abs() > 1e-8 {
            return Err(invalid(format!("sample {i} has norm {norm}, expected a unit vector")));
        }
    }
    let j = match step {
        None => 1,
        Some(s) if s > 0.0 => ((s / h).round() as usize).max(1),
        Some(s) => return Err(invalid(format!("step must be positive, got {s}"))),
    };
    if 2 * j >= n {
        return Err(invalid("step too large for the number of samples"));
    }
    let hh = j as f64 * h;
    Ok((j..n - j)
        .map(|i| {
            let (prev, cur, next) = (samples[i - j].1, samples[i].1, samples[i + j].1);
            let d1: Vec<f64> = (0..3).map(|c| (next[c] - prev[c]) / (2.0 * hh)).collect();
            let d2: Vec<f64> = (0..3)
                .map(|c| (next[c] - 2.0 * cur[c] + prev[c]) / (hh * hh))
                .collect();
            let det = dot(&cur, &cross(&d1, &d2));
            SpanningRow {
                t: samples[i].0,
                det,
                spans: det.abs() >= SPANNING_TOLERANCE,
            }
        })
        .collect())
}
