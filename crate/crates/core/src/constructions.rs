//! Deterministic generators for self-similar attractors and the named
//! example sets: the dyadic cluster set accumulating at 0, the
//! equicontractive family `S_i(x) = (x + 2i)/N`, the level-dependent Moran
//! construction, and Cartesian products.
//!
//! Attractors are approximated by forward iteration of the Hutchinson
//! operator on a seed set, so every output is reproducible bit for bit.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geom::{dist, PointCloud, SimilarityMap};
use crate::scalar::{max_of, two_pow, Scalar};

pub const DEFAULT_POINT_CAP: usize = 5_000_000;

/// Finite family of contracting similarities.
#[derive(Clone, Debug, PartialEq)]
pub struct Ifs<T: Scalar> {
    maps: Vec<SimilarityMap<T>>,
    pub label: String,
}

impl<T: Scalar> Ifs<T> {
    pub fn new(maps: Vec<SimilarityMap<T>>, label: impl Into<String>) -> Result<Self> {
        let first = maps.first().ok_or_else(|| invalid("an IFS needs at least one map"))?;
        let d = first.dim();
        for (i, m) in maps.iter().enumerate() {
            if m.dim() != d {
                return Err(Error::DimensionMismatch {
                    left: d,
                    right: m.dim(),
                });
            }
            if *m.scale() >= T::one() {
                return Err(invalid(format!("map {i} has scale {} >= 1", m.scale())));
            }
        }
        Ok(Self {
            maps,
            label: label.into(),
        })
    }

    /// `{x/3, x/3 + 2/3}`.
    pub fn triadic_cantor() -> Self {
        let third = T::ratio(1, 3);
        Self::new(
            vec![
                SimilarityMap::homothety(third.clone(), vec![T::zero()]),
                SimilarityMap::homothety(third, vec![T::ratio(2, 3)]),
            ],
            "triadic Cantor",
        )
        .expect("static maps are valid")
    }

    pub fn maps(&self) -> &[SimilarityMap<T>] {
        &self.maps
    }

    pub fn dim(&self) -> usize {
        self.maps[0].dim()
    }

    pub fn ratios(&self) -> Vec<T> {
        self.maps.iter().map(|m| m.scale().clone()).collect()
    }

    pub fn max_scale(&self) -> T {
        self.maps
            .iter()
            .fold(T::zero(), |acc, m| max_of(acc, m.scale().clone()))
    }

    /// A ball `B(p, ρ)` containing the attractor, with `p` the fixed point of
    /// the first map and `ρ = max_i |S_i(p) - p| / (1 - c_i)`.
    pub fn enclosing_ball(&self) -> Result<(Vec<T>, T)> {
        let p = self.maps[0].fixed_point()?;
        let rho = self.maps.iter().fold(T::zero(), |acc, m| {
            let moved = dist(&m.apply_point(&p), &p);
            max_of(acc, moved / (T::one() - m.scale().clone()))
        });
        Ok((p, rho))
    }
}

/// `{0}` in dimension `dim`.
pub fn default_seed<T: Scalar>(dim: usize) -> PointCloud<T> {
    PointCloud::singleton(vec![T::zero(); dim]).expect("origin is a valid cloud")
}

fn check_cap(projected: u128, cap: usize) -> Result<()> {
    if projected > cap as u128 {
        return Err(Error::PointCap { projected, cap });
    }
    Ok(())
}

/// Union of all `depth`-fold compositions of the maps applied to `seed`.
///
/// The returned resolution is `c^depth · (max_s |s - p| + ρ)` with `c` the
/// largest ratio and `B(p, ρ)` from [`Ifs::enclosing_ball`], a bound on the
/// Hausdorff distance to the true attractor.
pub fn ifs_attractor<T: Scalar>(
    ifs: &Ifs<T>,
    depth: usize,
    seed: &PointCloud<T>,
    cap: usize,
) -> Result<PointCloud<T>> {
    seed.check_dim(ifs.dim())?;
    if depth == 0 {
        return Err(invalid("depth must be >= 1"));
    }
    let m = ifs.maps.len() as u128;
    let projected = m
        .checked_pow(depth as u32)
        .and_then(|p| p.checked_mul(seed.len() as u128))
        .unwrap_or(u128::MAX);
    check_cap(projected, cap)?;

    let d = ifs.dim();
    let mut pts: Vec<T> = seed.coords().to_vec();
    for _ in 0..depth {
        let mut next = Vec::with_capacity(pts.len() * ifs.maps.len());
        for map in &ifs.maps {
            for p in pts.chunks_exact(d) {
                next.extend(map.apply_point(p));
            }
        }
        pts = next;
    }

    let (center, rho) = ifs.enclosing_ball()?;
    let seed_spread = seed
        .points()
        .fold(T::zero(), |acc, s| max_of(acc, dist(s, &center)));
    let resolution = ifs.max_scale().pow_int(depth as i32) * (seed_spread + rho)
        + seed.resolution().clone() * ifs.max_scale().pow_int(depth as i32);
    PointCloud::from_flat(d, pts, resolution)
}

/// `{0} ∪ {2^-k + l 4^-k : 1 ≤ k ≤ kmax, 0 ≤ l ≤ k}`, exact.
pub fn example_1_4<T: Scalar>(kmax: usize) -> Result<PointCloud<T>> {
    if kmax == 0 {
        return Err(invalid("kmax must be >= 1"));
    }
    let mut pts = vec![T::zero()];
    for k in 1..=kmax {
        let base: T = two_pow(-(k as i32));
        let step: T = two_pow(-2 * k as i32);
        for l in 0..=k {
            pts.push(base.clone() + step.clone() * T::from_int(l as i64));
        }
    }
    PointCloud::from_values(pts)
}

/// `{0} ∪ {2^-k : 1 ≤ k ≤ kmax}`: the cluster set with every cluster
/// collapsed to its left point.
pub fn example_1_4_skeleton<T: Scalar>(kmax: usize) -> Result<PointCloud<T>> {
    if kmax == 0 {
        return Err(invalid("kmax must be >= 1"));
    }
    let mut pts = vec![T::zero()];
    pts.extend((1..=kmax).map(|k| two_pow::<T>(-(k as i32))));
    PointCloud::from_values(pts)
}

/// `S_i(x) = (x + 2i)/N` for `i = 0..K-1`.
pub fn example_2_7<T: Scalar>(n: i64, k: i64) -> Result<Ifs<T>> {
    if n < 2 {
        return Err(invalid(format!("need N >= 2, got N = {n}")));
    }
    if k < 1 {
        return Err(invalid(format!("need K >= 1, got K = {k}")));
    }
    if 2 * k - 1 > n {
        return Err(invalid(format!(
            "need 2K - 1 <= N, got 2*{k} - 1 = {} > {n}",
            2 * k - 1
        )));
    }
    let maps = (0..k)
        .map(|i| SimilarityMap::homothety(T::ratio(1, n), vec![T::ratio(2 * i, n)]))
        .collect();
    Ifs::new(maps, format!("(x + 2i)/{n}, i < {k}"))
}

fn check_ratio<T: Scalar>(name: &str, x: &T) -> Result<()> {
    if *x <= T::zero() || *x >= T::one() {
        return Err(invalid(format!("{name} must lie in (0,1), got {x}")));
    }
    Ok(())
}

/// Stage-`k` system `{a^(2^k) x, b^(2^k) x + 1 - b^(2^k)}`.
pub fn moran_stage_ifs<T: Scalar>(a: &T, b: &T, k: usize) -> Result<Ifs<T>> {
    check_ratio("a", a)?;
    check_ratio("b", b)?;
    let e = 1i32
        .checked_shl(k as u32)
        .filter(|_| k < 31)
        .ok_or_else(|| invalid("stage index too large"))?;
    let (ak, bk) = (a.pow_int(e), b.pow_int(e));
    Ifs::new(
        vec![
            SimilarityMap::homothety(ak, vec![T::zero()]),
            SimilarityMap::homothety(bk.clone(), vec![T::one() - bk]),
        ],
        format!("Moran stage {k}"),
    )
}

/// Endpoints of the nested intervals obtained by subdividing `[0,1]` once per
/// letter of `word`, coarsest letter first. Letter `k` splits an interval
/// `[x, x+L]` into `[x, x + a^(2^k) L]` and `[x + L - b^(2^k) L, x + L]`.
pub fn moran_from_word<T: Scalar>(a: &T, b: &T, word: &[usize], cap: usize) -> Result<PointCloud<T>> {
    check_ratio("a", a)?;
    check_ratio("b", b)?;
    let projected = 1u128
        .checked_shl(word.len() as u32)
        .filter(|_| word.len() < 127)
        .map(|p| p * 2)
        .unwrap_or(u128::MAX);
    check_cap(projected, cap)?;

    let mut stage_ratios: Vec<Option<(T, T)>> = Vec::new();
    let mut intervals: Vec<(T, T)> = vec![(T::zero(), T::one())];
    for &k in word {
        if k == 0 {
            return Err(invalid("stage indices start at 1"));
        }
        if stage_ratios.len() <= k {
            stage_ratios.resize(k + 1, None);
        }
        if stage_ratios[k].is_none() {
            let ifs = moran_stage_ifs(a, b, k)?;
            let r = ifs.ratios();
            stage_ratios[k] = Some((r[0].clone(), r[1].clone()));
        }
        let (ak, bk) = stage_ratios[k].clone().expect("filled above");
        let mut next = Vec::with_capacity(intervals.len() * 2);
        for (x, len) in intervals {
            let right_len = bk.clone() * len.clone();
            next.push((x.clone(), ak.clone() * len.clone()));
            next.push((x + len - right_len.clone(), right_len));
        }
        intervals = next;
    }
    let resolution = intervals
        .iter()
        .fold(T::zero(), |acc, (_, len)| max_of(acc, len.clone()));
    let mut pts = Vec::with_capacity(intervals.len() * 2);
    for (x, len) in intervals {
        pts.push(x.clone() + len);
        pts.push(x);
    }
    PointCloud::from_flat(1, pts, resolution)
}

/// Stage word `1^N(1) 2^N(2) ... levels^N(levels)`.
pub fn moran_word(levels: usize, rep: impl Fn(usize) -> usize) -> Result<Vec<usize>> {
    if levels == 0 {
        return Err(invalid("levels must be >= 1"));
    }
    let mut word = Vec::new();
    for k in 1..=levels {
        let n = rep(k);
        if n == 0 {
            return Err(invalid(format!("rep({k}) must be >= 1")));
        }
        word.extend(std::iter::repeat_n(k, n));
    }
    Ok(word)
}

/// Level-dependent Moran set: `rep(k)` subdivisions with the stage-`k`
/// system for `k = 1..=levels`. The resolution is the longest surviving
/// interval.
pub fn moran_construction<T: Scalar>(
    a: &T,
    b: &T,
    levels: usize,
    rep: impl Fn(usize) -> usize,
    cap: usize,
) -> Result<PointCloud<T>> {
    let word = moran_word(levels, rep)?;
    moran_from_word(a, b, &word, cap)
}

/// The stage-`k` block: `[0,1]` subdivided `reps` times by the stage-`k`
/// system alone. Every stage-`k` piece of a Moran set is a similar copy of
/// this block down to the scale where stage `k + 1` begins.
pub fn moran_stage_block<T: Scalar>(a: &T, b: &T, k: usize, reps: usize, cap: usize) -> Result<PointCloud<T>> {
    if reps == 0 {
        return Err(invalid("reps must be >= 1"));
    }
    moran_from_word(a, b, &vec![k; reps], cap)
}

/// Cartesian product; resolution `sqrt(δa² + δb²)`.
pub fn product<T: Scalar>(a: &PointCloud<T>, b: &PointCloud<T>, cap: usize) -> Result<PointCloud<T>> {
    check_cap(a.len() as u128 * b.len() as u128, cap)?;
    let d = a.dim() + b.dim();
    let mut flat = Vec::with_capacity(a.len() * b.len() * d);
    for p in a.points() {
        for q in b.points() {
            flat.extend_from_slice(p);
            flat.extend_from_slice(q);
        }
    }
    let (ra, rb) = (a.resolution().clone(), b.resolution().clone());
    PointCloud::from_flat(d, flat, (ra.clone() * ra + rb.clone() * rb).square_root())
}

/// Repetition schedule `k ↦ N(k)` for the Moran construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Repetition {
    Constant { value: usize },
    /// `N(k) = slope · k`.
    Linear { slope: usize },
    /// `N(k) = values[k-1]`.
    Table { values: Vec<usize> },
}

impl Repetition {
    pub fn count(&self, k: usize) -> usize {
        match self {
            Repetition::Constant { value } => *value,
            Repetition::Linear { slope } => slope * k,
            Repetition::Table { values } => values.get(k.wrapping_sub(1)).copied().unwrap_or(0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    pub scale: f64,
    /// Identity when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orthogonal: Option<Vec<Vec<f64>>>,
    pub translation: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IfsSpec {
    pub maps: Vec<MapSpec>,
    #[serde(default)]
    pub label: String,
}

impl MapSpec {
    pub fn build<T: Scalar>(&self) -> Result<SimilarityMap<T>> {
        let d = self.translation.len();
        let o = self.orthogonal.clone().unwrap_or_else(|| {
            (0..d)
                .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                .collect()
        });
        SimilarityMap::new(
            T::from_f64_lossy(self.scale),
            o.into_iter()
                .map(|row| row.into_iter().map(T::from_f64_lossy).collect())
                .collect(),
            self.translation.iter().copied().map(T::from_f64_lossy).collect(),
        )
    }
}

impl IfsSpec {
    pub fn build<T: Scalar>(&self) -> Result<Ifs<T>> {
        let maps = self.maps.iter().map(MapSpec::build).collect::<Result<Vec<_>>>()?;
        Ifs::new(maps, self.label.clone())
    }
}

/// Declarative recipe for a cloud, serialized with a `variant` tag.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum ConstructionSpec {
    PlainIFS {
        ifs: IfsSpec,
        depth: usize,
        /// Defaults to the origin.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<Vec<Vec<f64>>>,
    },
    Example14 {
        kmax: usize,
    },
    Example27 {
        #[serde(rename = "N")]
        n: i64,
        #[serde(rename = "K")]
        k: i64,
        depth: usize,
    },
    Moran {
        a: f64,
        b: f64,
        levels: usize,
        rep: Repetition,
    },
    Product {
        a: Box<ConstructionSpec>,
        b: Box<ConstructionSpec>,
    },
}

impl ConstructionSpec {
    pub fn generate<T: Scalar>(&self, cap: usize) -> Result<PointCloud<T>> {
        match self {
            ConstructionSpec::PlainIFS { ifs, depth, seed } => {
                let ifs = ifs.build::<T>()?;
                let seed = match seed {
                    Some(pts) => PointCloud::new(
                        ifs.dim(),
                        pts.iter()
                            .map(|p| p.iter().copied().map(T::from_f64_lossy).collect())
                            .collect(),
                        T::zero(),
                    )?,
                    None => default_seed(ifs.dim()),
                };
                ifs_attractor(&ifs, *depth, &seed, cap)
            }
            ConstructionSpec::Example14 { kmax } => example_1_4(*kmax),
            ConstructionSpec::Example27 { n, k, depth } => {
                let ifs = example_2_7::<T>(*n, *k)?;
                ifs_attractor(&ifs, *depth, &default_seed(1), cap)
            }
            ConstructionSpec::Moran { a, b, levels, rep } => moran_construction(
                &T::from_f64_lossy(*a),
                &T::from_f64_lossy(*b),
                *levels,
                |k| rep.count(k),
                cap,
            ),
            ConstructionSpec::Product { a, b } => product(&a.generate(cap)?, &b.generate(cap)?, cap),
        }
    }
}
