//! The `verify-paper` suite: fixed, numbered checks grouped by criterion.
//! Check ids are stable; new checks get new ids.

use std::fmt::Write as _;
use std::time::Instant;

use assouad::constructions::{
    default_seed, example_1_4, example_2_7, ifs_attractor, moran_stage_block, moran_stage_ifs, product, Ifs,
    DEFAULT_POINT_CAP,
};
use assouad::dimension::{
    assouad_estimate, box_dimension, covering_count, exception_bound, falconer_erdogan_bound,
    falconer_erdogan_subcritical, falconer_erdogan_threshold, similarity_dimension, AssouadConfig, BoxConfig, Probe,
};
use assouad::distances::{distance_set, distance_set_via_projection, log_lattice_gaps, DEFAULT_PAIR_CAP};
use assouad::io::fmt_sig;
use assouad::projections::{project, projection_sweep, sample_curve, sample_directions, spanning_check};
use assouad::tangents::{convergence_trace, tangent_comparison_1_4, uniform_grid, zoom, ZoomRule, ZoomSequence};
use assouad::{apply_similarity, hausdorff_distance, Cloud, Exact, ExactCloud, PointCloud, Scalar, Similarity, Window};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Every check id with its criterion, in run order.
pub const CHECKS: &[(&str, u8)] = &[
    ("cantor.counts", 1),
    ("cantor.box", 1),
    ("cantor.assouad", 1),
    ("example27.box", 2),
    ("example27.distance_box", 2),
    ("example27.distance_upper", 2),
    ("pipelines.random", 3),
    ("pipelines.example27", 3),
    ("lattice.irrational", 4),
    ("lattice.rational", 4),
    ("example14.zoom_grid", 5),
    ("example14.stand_in", 5),
    ("example14.pinned", 5),
    ("comparison.example14", 6),
    ("moran.similarity", 7),
    ("moran.envelope", 7),
    ("sweep.cxc.fraction", 8),
    ("sweep.cxc.axes", 8),
    ("formulas.fe_continuity", 9),
    ("formulas.exception_boundary", 9),
    ("props.hausdorff_metric", 10),
    ("props.lipschitz", 10),
    ("props.distance_similarity", 10),
    ("props.covering_monotone", 10),
    ("props.estimator_order", 10),
    ("props.spanning_great_circle", 10),
    ("props.spanning_small_circle", 10),
];

pub const CRITERIA: std::ops::RangeInclusive<u8> = 1..=10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `|measured - expected| ≤ tolerance`.
    Within,
    /// `measured ≥ expected - tolerance`.
    AtLeast,
    /// `measured ≤ expected + tolerance`.
    AtMost,
    /// `measured < expected`.
    Below,
    /// `measured > expected`.
    Above,
}

impl Relation {
    pub fn holds(self, measured: f64, expected: f64, tolerance: f64) -> bool {
        match self {
            Relation::Within => (measured - expected).abs() <= tolerance,
            Relation::AtLeast => measured >= expected - tolerance,
            Relation::AtMost => measured <= expected + tolerance,
            Relation::Below => measured < expected,
            Relation::Above => measured > expected,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Relation::Within => "≈",
            Relation::AtLeast => "≥",
            Relation::AtMost => "≤",
            Relation::Below => "<",
            Relation::Above => ">",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub criterion: u8,
    pub description: String,
    pub relation: Relation,
    pub expected: f64,
    pub tolerance: f64,
    /// Missing when the computation failed.
    pub measured: Option<f64>,
    pub pass: bool,
    pub seconds: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub seed: u64,
    pub seconds: f64,
    pub checks: Vec<CheckResult>,
}

type Res<T> = assouad::Result<T>;

struct Recorder {
    criterion: u8,
    seed: u64,
    out: Vec<CheckResult>,
    /// Shared setup since the last check is billed to the next one.
    mark: Instant,
}

impl Recorder {
    fn check(
        &mut self,
        id: &str,
        description: impl Into<String>,
        relation: Relation,
        expected: f64,
        tolerance: f64,
        measure: impl FnOnce() -> Res<f64>,
    ) {
        debug_assert!(CHECKS.contains(&(id, self.criterion)), "unregistered check {id}");
        let (measured, error) = match measure() {
            Ok(m) => (Some(m), None),
            Err(e) => (None, Some(e.to_string())),
        };
        let now = Instant::now();
        self.out.push(CheckResult {
            id: id.into(),
            criterion: self.criterion,
            description: description.into(),
            relation,
            expected,
            tolerance,
            pass: measured.is_some_and(|m| relation.holds(m, expected, tolerance)),
            measured,
            seconds: (now - self.mark).as_secs_f64(),
            error,
        });
        self.mark = now;
    }
}

/// Runs one criterion. A setup failure fails every check of the criterion.
pub fn run_criterion(criterion: u8, seed: u64) -> Vec<CheckResult> {
    let mut r = Recorder {
        criterion,
        seed,
        out: Vec::new(),
        mark: Instant::now(),
    };
    let status = match criterion {
        1 => cantor(&mut r),
        2 => example_2_7_checks(&mut r),
        3 => pipelines(&mut r),
        4 => lattice(&mut r),
        5 => example_1_4_checks(&mut r),
        6 => comparison(&mut r),
        7 => moran(&mut r),
        8 => sweep(&mut r),
        9 => formulas(&mut r),
        10 => properties(&mut r),
        _ => Ok(()),
    };
    if let Err(e) = status {
        let seconds = r.mark.elapsed().as_secs_f64();
        for &(id, c) in CHECKS.iter().filter(|(_, c)| *c == criterion) {
            if r.out.iter().all(|x| x.id != id) {
                r.out.push(CheckResult {
                    id: id.into(),
                    criterion: c,
                    description: "setup failed".into(),
                    relation: Relation::Within,
                    expected: f64::NAN,
                    tolerance: 0.0,
                    measured: None,
                    pass: false,
                    seconds,
                    error: Some(e.to_string()),
                });
            }
        }
    }
    r.out
}

/// Runs the selected criteria (all when `only` is empty).
pub fn run_suite(only: &[u8], seed: u64) -> VerifyReport {
    let start = Instant::now();
    let checks: Vec<CheckResult> = CRITERIA
        .filter(|c| only.is_empty() || only.contains(c))
        .flat_map(|c| {
            log::info!("criterion {c}");
            run_criterion(c, seed)
        })
        .collect();
    VerifyReport {
        pass: checks.iter().all(|c| c.pass),
        seed,
        seconds: start.elapsed().as_secs_f64(),
        checks,
    }
}

pub fn render_table(report: &VerifyReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<30} {:>4}  {:<34} {:<18} {:>8}  result", "check", "crit", "expected", "measured", "seconds");
    for c in &report.checks {
        let expected = match c.relation {
            Relation::Within => format!("{} {} ± {}", c.relation.symbol(), fmt_sig(c.expected), fmt_sig(c.tolerance)),
            _ if c.tolerance > 0.0 => format!("{} {} (tol {})", c.relation.symbol(), fmt_sig(c.expected), fmt_sig(c.tolerance)),
            _ => format!("{} {}", c.relation.symbol(), fmt_sig(c.expected)),
        };
        let measured = c.measured.map_or_else(|| "error".to_string(), fmt_sig);
        let verdict = if c.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(
            s,
            "{:<30} {:>4}  {:<34} {:<18} {:>8.2}  {verdict}",
            c.id, c.criterion, expected, measured, c.seconds
        );
        if let Some(e) = &c.error {
            let _ = writeln!(s, "    error: {e}");
        }
    }
    let passed = report.checks.iter().filter(|c| c.pass).count();
    let _ = writeln!(
        s,
        "{passed}/{} checks passed in {:.1} s: {}",
        report.checks.len(),
        report.seconds,
        if report.pass { "PASS" } else { "FAIL" }
    );
    s
}

pub fn cantor_cloud(depth: usize) -> Res<Cloud> {
    let seed = PointCloud::from_values(vec![0.0, 1.0])?;
    ifs_attractor(&Ifs::triadic_cantor(), depth, &seed, DEFAULT_POINT_CAP)
}

pub fn example_2_7_cloud() -> Res<Cloud> {
    ifs_attractor(&example_2_7::<f64>(9, 3)?, 6, &default_seed(1), DEFAULT_POINT_CAP)
}

fn log_ratio(a: f64, b: f64) -> f64 {
    a.ln() / b.ln()
}

/// Level-`k` Cantor intervals `[l/3^k, (l+1)/3^k]` (ternary digits of `l`
/// in {0, 2}) that contain a point of `f`.
fn cantor_intervals_met(f: &ExactCloud, k: u32) -> usize {
    let scale = Exact::from_integer(3.into()).pow(k as i32);
    let top = 3i64.pow(k);
    let is_cantor = |mut l: i64| {
        (0..k).all(|_| {
            let d = l % 3;
            l /= 3;
            d != 1
        })
    };
    let mut met = std::collections::BTreeSet::new();
    for x in f.values() {
        let y = x * &scale;
        let l = y.floor().to_integer();
        let l: i64 = l.try_into().unwrap_or(i64::MAX);
        let mut cands = vec![l];
        if y.is_integer() {
            cands.push(l - 1);
        }
        met.extend(cands.into_iter().filter(|&c| (0..top).contains(&c) && is_cantor(c)));
    }
    met.len()
}

fn cantor(r: &mut Recorder) -> Res<()> {
    let dim = log_ratio(2.0, 3.0);
    let seed = PointCloud::from_values(vec![Exact::from_int(0), Exact::from_int(1)])?;
    let exact = ifs_attractor(&Ifs::<Exact>::triadic_cantor(), 12, &seed, DEFAULT_POINT_CAP)?;
    r.check(
        "cantor.counts",
        "worst |#(level-k intervals met) - 2^k| for k = 1..10, depth-12 triadic Cantor",
        Relation::AtMost,
        0.0,
        0.0,
        || {
            Ok((1..=10)
                .map(|k| (cantor_intervals_met(&exact, k) as f64 - (1u64 << k) as f64).abs())
                .fold(0.0, f64::max))
        },
    );
    let f = exact.to_f64();
    r.check(
        "cantor.box",
        "box dimension of the triadic Cantor set over r in [3^-10, 3^-2]",
        Relation::Within,
        dim,
        0.03,
        || Ok(box_dimension(&f, &BoxConfig::new(3f64.powi(-10), 3f64.powi(-2), 9))?.value),
    );
    r.check(
        "cantor.assouad",
        "Assouad estimate of the triadic Cantor set, R in {1/2, 1/4, 1/8}, R/r up to 2^10",
        Relation::Within,
        dim,
        0.07,
        || {
            let cfg = AssouadConfig::new(vec![0.5, 0.25, 0.125], (1..=10).map(|j| 2f64.powi(j)).collect());
            Ok(assouad_estimate(&f, &cfg)?.value)
        },
    );
    Ok(())
}

fn example_2_7_checks(r: &mut Recorder) -> Res<()> {
    let f = example_2_7_cloud()?;
    r.check(
        "example27.box",
        "box dimension of the N=9, K=3 attractor (depth 6) against log K / log N",
        Relation::Within,
        log_ratio(3.0, 9.0),
        0.05,
        || Ok(box_dimension(&f, &BoxConfig::auto(&f))?.value),
    );
    let d = distance_set(&f, DEFAULT_PAIR_CAP)?;
    let dd = box_dimension(&d, &BoxConfig::auto(&d))?.value;
    let (lo, hi) = (log_ratio(3.0, 9.0) - 0.05, log_ratio(5.0, 9.0) + 0.05);
    r.check(
        "example27.distance_box",
        "box dimension of the distance set lies in [log 3/log 9 - 0.05, log 5/log 9 + 0.05]",
        Relation::Within,
        (lo + hi) / 2.0,
        (hi - lo) / 2.0,
        || Ok(dd),
    );
    r.check(
        "example27.distance_upper",
        "box dimension of the distance set against log(2K-1)/log N",
        Relation::AtMost,
        log_ratio(5.0, 9.0),
        0.05,
        || Ok(dd),
    );
    Ok(())
}

/// A 1-d cloud of up to 200 points: integer grids (many repeated
/// distances) or uniform reals.
pub fn random_line_cloud(rng: &mut impl Rng) -> Cloud {
    let n = rng.random_range(1..=200);
    let v: Vec<f64> = if rng.random_bool(0.5) {
        (0..n).map(|_| rng.random_range(0..60) as f64).collect()
    } else {
        (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
    };
    PointCloud::from_values(v).expect("finite, non-empty")
}

fn pipelines(r: &mut Recorder) -> Res<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(r.seed);
    let clouds: Vec<Cloud> = (0..100).map(|_| random_line_cloud(&mut rng)).collect();
    let mismatches = |fs: &[Cloud]| -> Res<f64> {
        let mut bad = 0;
        for f in fs {
            if distance_set(f, DEFAULT_PAIR_CAP)? != distance_set_via_projection(f, DEFAULT_PAIR_CAP)? {
                bad += 1;
            }
        }
        Ok(bad as f64)
    };
    r.check(
        "pipelines.random",
        "random 1-d clouds (100, at most 200 points) whose two distance-set pipelines differ",
        Relation::AtMost,
        0.0,
        0.0,
        || mismatches(&clouds),
    );
    r.check(
        "pipelines.example27",
        "the two distance-set pipelines differ on the N=9, K=3 attractor",
        Relation::AtMost,
        0.0,
        0.0,
        || mismatches(&[example_2_7_cloud()?]),
    );
    Ok(())
}

fn lattice(r: &mut Recorder) -> Res<()> {
    r.check(
        "lattice.irrational",
        "largest gap of {m ln(1/2) + n ln(1/3)}, M = 300, in [-1, -0.01]",
        Relation::Below,
        0.02,
        0.0,
        || Ok(log_lattice_gaps(0.5, 1.0 / 3.0, 300, (-1.0, -0.01))?.max_gap),
    );
    r.check(
        "lattice.rational",
        "largest gap of {m ln(1/2) + n ln(1/4)}, M = 300, in [-1, -0.01]",
        Relation::AtLeast,
        0.69,
        0.0,
        || Ok(log_lattice_gaps(0.5, 0.25, 300, (-1.0, -0.01))?.max_gap),
    );
    Ok(())
}

fn example_1_4_checks(r: &mut Recorder) -> Res<()> {
    let kmax = 64;
    let f: ExactCloud = example_1_4(kmax)?;
    let seq = ZoomSequence {
        rule: ZoomRule::Example14,
        window: Window::unit_box(1),
        k_range: (1, kmax),
    };
    let frames = zoom(&f, &seq)?;
    r.check(
        "example14.zoom_grid",
        "worst Hausdorff distance from the k-th zoom to {l/k}, k <= 64 (exact arithmetic)",
        Relation::AtMost,
        0.0,
        0.0,
        || {
            if frames.len() != kmax {
                return Ok(f64::INFINITY);
            }
            let mut worst = Exact::from_int(0);
            for fr in &frames {
                worst = worst.max(hausdorff_distance(&fr.cloud, &uniform_grid(fr.k)?)?);
            }
            Ok(worst.lossy())
        },
    );
    r.check(
        "example14.stand_in",
        "worst excess of d_H(zoom_k, {l/2048}) over 1/(2k) + 2^-11, k <= 64",
        Relation::AtMost,
        0.0,
        0.0,
        || {
            let trace = convergence_trace(&frames, &uniform_grid(2048)?)?;
            Ok(trace
                .rows
                .iter()
                .map(|row| row.distance - (1.0 / (2.0 * row.k as f64) + 2f64.powi(-11)))
                .fold(f64::NEG_INFINITY, f64::max))
        },
    );
    r.check(
        "example14.pinned",
        "Assouad estimate with the probe x = 2^-50, R = 50·4^-50, R/r = 50",
        Relation::AtLeast,
        0.95,
        0.0,
        || {
            let k = 50;
            let f: ExactCloud = example_1_4(k)?;
            let cfg = AssouadConfig::default().with_max_centers(0).with_probes(vec![Probe {
                center: vec![2f64.powi(-(k as i32))],
                big_r: k as f64 * 4f64.powi(-(k as i32)),
                ratios: vec![k as f64],
            }]);
            Ok(assouad_estimate(&f, &cfg)?.value)
        },
    );
    Ok(())
}

fn comparison(r: &mut Recorder) -> Res<()> {
    r.check(
        "comparison.example14",
        "worst excess of d_H(cF, cF0) in B(0,1) over m 2^-m + 2^-40, c = 2^n, n <= 20",
        Relation::AtMost,
        0.0,
        0.0,
        || {
            let scales: Vec<f64> = (1..=20).map(|n| 2f64.powi(n)).collect();
            let rows = tangent_comparison_1_4::<Exact>(40, &scales)?;
            Ok(rows
                .iter()
                .map(|row| row.distance - row.bound - row.truncation)
                .fold(f64::NEG_INFINITY, f64::max))
        },
    );
    Ok(())
}

/// Assouad estimate of the stage-`k` Moran block (`a = b = 1/2`, `4k`
/// subdivisions) at its own scales `R = 1`, `R/r = c^-j`, `c = 2^(-2^k)`.
pub fn moran_block_estimate(k: usize) -> Res<f64> {
    let half = Exact::new(1.into(), 2.into());
    let reps = 4 * k;
    let block = moran_stage_block(&half, &half, k, reps, DEFAULT_POINT_CAP)?;
    let c = 2f64.powi(-(1 << k));
    let cfg = AssouadConfig::new(vec![1.0], (1..reps as i32).map(|j| c.powi(-j)).collect());
    Ok(assouad_estimate(&block, &cfg)?.value)
}

fn moran(r: &mut Recorder) -> Res<()> {
    r.check(
        "moran.similarity",
        "worst |similarity dimension of stage-k ratios - 2^-k|, k = 1..10, a = b = 1/2",
        Relation::AtMost,
        0.0,
        1e-10,
        || {
            let mut worst: f64 = 0.0;
            for k in 1..=10 {
                let ratios = moran_stage_ifs(&0.5f64, &0.5, k)?.ratios();
                worst = worst.max((similarity_dimension(&ratios) - 2f64.powi(-(k as i32))).abs());
            }
            Ok(worst)
        },
    );
    r.check(
        "moran.envelope",
        "non-decreasing steps of the stage-k block Assouad estimates, k = 1..4, rep(k) = 4k",
        Relation::AtMost,
        0.0,
        0.0,
        || {
            let est = (1..=4).map(moran_block_estimate).collect::<Res<Vec<_>>>()?;
            log::info!("stage block estimates {est:?}");
            Ok(est.windows(2).filter(|w| w[1] >= w[0]).count() as f64)
        },
    );
    Ok(())
}

/// Triadic `C × C` from depth-8 Cantor endpoints seeded at 0.
pub fn cantor_dust(depth: usize) -> Res<Cloud> {
    let c = ifs_attractor(&Ifs::<f64>::triadic_cantor(), depth, &default_seed(1), DEFAULT_POINT_CAP)?;
    product(&c, &c, DEFAULT_POINT_CAP)
}

fn sweep(r: &mut Recorder) -> Res<()> {
    let dust = cantor_dust(8)?;
    let dirs = sample_directions(2, 1, 180)?;
    let report = projection_sweep(&dust, &dirs, None, 0.85)?;
    r.check(
        "sweep.cxc.fraction",
        "fraction of 180 directions whose projection of C×C (depth 8) estimates >= 0.85",
        Relation::AtLeast,
        0.95,
        0.0,
        || Ok(1.0 - report.flagged_fraction),
    );
    r.check(
        "sweep.cxc.axes",
        "worst |axis projection estimate - log 2/log 3|",
        Relation::AtMost,
        0.0,
        0.05,
        || {
            let dim = log_ratio(2.0, 3.0);
            Ok([0, 90]
                .iter()
                .map(|&i| (report.rows[i].estimate.value - dim).abs())
                .fold(0.0, f64::max))
        },
    );
    Ok(())
}

fn formulas(r: &mut Recorder) -> Res<()> {
    r.check(
        "formulas.fe_continuity",
        "worst deviation from 1 of both branches of the distance-set bound at s = d/2 + 1/3, d = 2..6",
        Relation::AtMost,
        0.0,
        1e-12,
        || {
            Ok((2..=6)
                .map(|d| {
                    let s = falconer_erdogan_threshold(d);
                    let below = falconer_erdogan_subcritical(d, s);
                    let at = falconer_erdogan_bound(d, s);
                    (below - 1.0).abs().max((at - 1.0).abs())
                })
                .fold(0.0, f64::max))
        },
    );
    r.check(
        "formulas.exception_boundary",
        "worst |exception bound at s = min(k, s_F) - k(d-k)| over d = 2..6",
        Relation::AtMost,
        0.0,
        0.0,
        || {
            let mut worst: f64 = 0.0;
            for d in 2..=6usize {
                for k in 1..d {
                    for s_f in [0.25, 0.5, 1.0, 1.5, 2.0, 2.75, d as f64] {
                        let s = (k as f64).min(s_f);
                        let v = exception_bound(d, k, s_f, s)?;
                        worst = worst.max((v - (k * (d - k)) as f64).abs());
                    }
                }
            }
            Ok(worst)
        },
    );
    Ok(())
}

fn random_cloud(rng: &mut impl Rng, dim: usize, max_points: usize) -> Cloud {
    let n = rng.random_range(1..=max_points);
    let pts = (0..n)
        .map(|_| (0..dim).map(|_| rng.random_range(-10.0..10.0)).collect())
        .collect();
    PointCloud::new(dim, pts, 0.0).expect("finite, non-empty")
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn properties(r: &mut Recorder) -> Res<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(r.seed ^ 0x10);
    r.check(
        "props.hausdorff_metric",
        "Hausdorff metric axiom violations over 1000 random planar triples",
        Relation::AtMost,
        0.0,
        0.0,
        || {
            let mut bad = 0;
            for _ in 0..1000 {
                let (a, b, c) = (
                    random_cloud(&mut rng, 2, 24),
                    random_cloud(&mut rng, 2, 24),
                    random_cloud(&mut rng, 2, 24),
                );
                let ab = hausdorff_distance(&a, &b)?;
                let ok = hausdorff_distance(&a, &a)? == 0.0
                    && ab == hausdorff_distance(&b, &a)?
                    && ab >= 0.0
                    && (ab == 0.0) == (a == b)
                    && ab <= (hausdorff_distance(&a, &c)? + hausdorff_distance(&c, &b)?) * (1.0 + 1e-12) + 1e-12;
                bad += usize::from(!ok);
            }
            Ok(bad as f64)
        },
    );
    r.check(
        "props.lipschitz",
        "projection pairs stretched beyond |x - y| over 1000 random pairs in R^3",
        Relation::AtMost,
        0.0,
        0.0,
        || {
            let lines = sample_directions(3, 1, 64)?;
            let planes = sample_directions(3, 2, 64)?;
            let mut bad = 0;
            for i in 0..1000 {
                let x: Vec<f64> = (0..3).map(|_| rng.random_range(-10.0..10.0)).collect();
                let y: Vec<f64> = (0..3).map(|_| rng.random_range(-10.0..10.0)).collect();
                let pick = rng.random_range(0..64);
                let v = if i % 2 == 0 { &lines[pick] } else { &planes[pick] };
                let p = project(&PointCloud::new(3, vec![x.clone(), y.clone()], 0.0)?, v)?;
                let img = if p.len() == 2 { euclid(p.point(0), p.point(1)) } else { 0.0 };
                bad += usize::from(img > euclid(&x, &y) * (1.0 + 1e-12) + 1e-12);
            }
            Ok(bad as f64)
        },
    );
    r.check(
        "props.distance_similarity",
        "worst relative error of D(cF + t) against c D(F), 200 random clouds",
        Relation::AtMost,
        0.0,
        1e-9,
        || {
            let mut worst: f64 = 0.0;
            for _ in 0..200 {
                let f = random_cloud(&mut rng, 1, 40);
                let c = rng.random_range(0.1..10.0);
                let t = rng.random_range(-3.0..3.0);
                let g = apply_similarity(&Similarity::homothety(c, vec![t]), &f)?;
                let (df, dg) = (distance_set(&f, DEFAULT_PAIR_CAP)?, distance_set(&g, DEFAULT_PAIR_CAP)?);
                if df.len() != dg.len() {
                    return Ok(f64::INFINITY);
                }
                for (a, b) in df.values().iter().zip(dg.values()) {
                    let scale = b.abs().max(f64::MIN_POSITIVE);
                    worst = worst.max((c * a - b).abs() / scale);
                }
            }
            Ok(worst)
        },
    );
    r.check(
        "props.covering_monotone",
        "covering counts that grow with r, 200 random planar clouds, r = 2^-6..2^4",
        Relation::AtMost,
        0.0,
        0.0,
        || {
            let mut bad = 0;
            for _ in 0..200 {
                let f = random_cloud(&mut rng, 2, 64);
                let counts = (-6..=4)
                    .map(|j| covering_count(&f, &2f64.powi(j)))
                    .collect::<Res<Vec<_>>>()?;
                bad += counts.windows(2).filter(|w| w[1] > w[0]).count();
            }
            Ok(bad as f64)
        },
    );
    r.check(
        "props.estimator_order",
        "worst box - Assouad over the suite clouds",
        Relation::AtMost,
        0.0,
        0.05,
        || {
            let ex = example_2_7_cloud()?;
            let grid = PointCloud::from_values((0..=1024).map(|i| i as f64 / 1024.0).collect())?
                .with_resolution(1.0 / 2048.0);
            let clouds = [
                cantor_cloud(12)?,
                distance_set(&ex, DEFAULT_PAIR_CAP)?,
                ex,
                grid,
                cantor_dust(6)?,
            ];
            let mut worst = f64::NEG_INFINITY;
            for f in &clouds {
                let b = box_dimension(f, &BoxConfig::auto(f))?.value;
                let a = assouad_estimate(f, &AssouadConfig::auto(f))?.value;
                worst = worst.max(b - a);
            }
            Ok(worst)
        },
    );
    let tau = std::f64::consts::TAU;
    r.check(
        "props.spanning_great_circle",
        "largest |det[φ, φ', φ'']| on the great circle, 400 samples",
        Relation::Below,
        1e-6,
        0.0,
        || {
            let great = sample_curve(|t| [(tau * t).cos(), (tau * t).sin(), 0.0], 400);
            Ok(spanning_check(&great, None)?.iter().map(|r| r.det.abs()).fold(0.0, f64::max))
        },
    );
    r.check(
        "props.spanning_small_circle",
        "smallest |det[φ, φ', φ'']| on the small circle at height 1/√2, 400 samples",
        Relation::Above,
        1e-3,
        0.0,
        || {
            let s = 0.5f64.sqrt();
            let small = sample_curve(|t| [s * (tau * t).cos(), s * (tau * t).sin(), s], 400);
            Ok(spanning_check(&small, None)?
                .iter()
                .map(|r| r.det.abs())
                .fold(f64::INFINITY, f64::min))
        },
    );
    Ok(())
}
