use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use assouad::constructions::ConstructionSpec;
use assouad::dimension::{assouad_estimate, box_dimension, AssouadConfig, BoxConfig, DimensionEstimate};
use assouad::distances::{distance_set, distance_set_via_projection, log_lattice_gaps};
use assouad::io::fmt_sig;
use assouad::projections::{projection_sweep, sample_directions, spanning_check, SpanningRow};
use assouad::tangents::{convergence_trace, uniform_grid, zoom, ZoomRule, ZoomSequence};
use assouad::{Cloud, Exact, PointCloud, Scalar, Window};
use serde::{Deserialize, Serialize};

use crate::args::MethodChoice;
use crate::config::{Command, RunConfig};
use crate::error::CliError;
use crate::output::{prepare_out_dir, read_cloud_file, read_json, write_cloud_file, write_csv, write_json};
use crate::verify;

/// What a successful run produced.
#[derive(Debug)]
pub struct Outcome {
    /// False only when `verify-paper` finished with failing checks.
    pub success: bool,
    pub artifacts: Vec<PathBuf>,
    /// Human-readable summary for stdout.
    pub summary: String,
}

impl Outcome {
    fn ok(artifacts: Vec<PathBuf>, summary: String) -> Self {
        Self {
            success: true,
            artifacts,
            summary,
        }
    }
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    prepare_out_dir(&cfg.out)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.workers {
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| dispatch(cfg))
}

fn dispatch(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let out = cfg.out.as_path();
    match &cfg.command {
        Command::Generate { spec, exact } => generate(cfg, spec, *exact),
        Command::Estimate { input, method } => estimate(cfg, input, *method),
        Command::DistanceSet { input } => {
            let f = read_cloud_file(input)?;
            let d = if cfg.via_projection {
                distance_set_via_projection(&f, cfg.cap_pairs)?
            } else {
                distance_set(&f, cfg.cap_pairs)?
            };
            let path = write_cloud_file(&out.join("distances.csv"), &d)?;
            Ok(Outcome::ok(vec![path], format!("{} distinct distances\n", d.len())))
        }
        Command::GapReport { a, b, big_m, window } => {
            let r = log_lattice_gaps(*a, *b, *big_m, *window)?;
            let path = write_json(&out.join("gap_report.json"), &r)?;
            let summary = format!(
                "max gap {} at [{}, {}] over {} lattice points\n",
                fmt_sig(r.max_gap),
                fmt_sig(r.gap_at.0),
                fmt_sig(r.gap_at.1),
                r.sample_count
            );
            Ok(Outcome::ok(vec![path], summary))
        }
        Command::ProjectSweep { input, rank } => sweep(cfg, input, *rank),
        Command::SpanningCheck { input, step } => spanning(out, input, *step),
        Command::TangentZoom { spec } => tangent_zoom(cfg, spec),
        Command::VerifyPaper { only } => {
            let report = verify::run_suite(only, cfg.seed);
            let json = write_json(&out.join("verify_report.json"), &report)?;
            let table = verify::render_table(&report);
            let txt = out.join("verify_report.txt");
            fs::write(&txt, &table).map_err(|e| CliError::io(&txt, e))?;
            Ok(Outcome {
                success: report.pass,
                artifacts: vec![json, txt],
                summary: table,
            })
        }
    }
}

fn generate(cfg: &RunConfig, spec: &Path, exact: bool) -> Result<Outcome, CliError> {
    let spec: ConstructionSpec = read_json(spec)?;
    let path = cfg.out.join("cloud.csv");
    let n = if exact {
        let f: PointCloud<Exact> = spec.generate(cfg.cap_points)?;
        write_cloud_file(&path, &f)?;
        f.len()
    } else {
        let f: Cloud = spec.generate(cfg.cap_points)?;
        write_cloud_file(&path, &f)?;
        f.len()
    };
    Ok(Outcome::ok(vec![path], format!("{n} points\n")))
}

#[derive(Serialize)]
struct EstimateReport {
    #[serde(rename = "box", skip_serializing_if = "Option::is_none")]
    box_estimate: Option<DimensionEstimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    assouad: Option<DimensionEstimate>,
}

fn estimate(cfg: &RunConfig, input: &Path, method: MethodChoice) -> Result<Outcome, CliError> {
    let f = read_cloud_file(input)?;
    let out = cfg.out.as_path();
    let mut artifacts = Vec::new();
    let mut summary = String::new();
    let box_estimate = match method {
        MethodChoice::Assouad => None,
        _ => {
            let bc = cfg.box_config.clone().unwrap_or_else(|| BoxConfig::auto(&f));
            let est = box_dimension(&f, &bc)?;
            let rows = est
                .diagnostics
                .scale_counts
                .iter()
                .map(|(r, n)| vec![fmt_sig(*r), n.to_string()]);
            artifacts.push(write_csv(&out.join("profile.csv"), "r,count", rows)?);
            line(&mut summary, "box", &est);
            Some(est)
        }
    };
    let assouad = match method {
        MethodChoice::Box => None,
        _ => {
            let mut ac = cfg.assouad.clone().unwrap_or_else(|| AssouadConfig::auto(&f));
            ac.pinned.extend(cfg.pin_centers.iter().cloned());
            let est = assouad_estimate(&f, &ac)?;
            if let Some(profile) = &est.diagnostics.profile {
                let header = (0..f.dim())
                    .map(|i| format!("x{i}"))
                    .chain(["big_r", "r", "count"].map(String::from))
                    .collect::<Vec<_>>()
                    .join(",");
                let rows = profile.entries.iter().map(|e| {
                    e.center
                        .iter()
                        .map(|x| fmt_sig(*x))
                        .chain([fmt_sig(e.big_r), fmt_sig(e.r), e.count.to_string()])
                        .collect()
                });
                artifacts.push(write_csv(&out.join("assouad_profile.csv"), &header, rows)?);
            }
            line(&mut summary, "assouad", &est);
            Some(est)
        }
    };
    let report = EstimateReport { box_estimate, assouad };
    artifacts.insert(0, write_json(&out.join("estimate.json"), &report)?);
    Ok(Outcome::ok(artifacts, summary))
}

fn line(s: &mut String, name: &str, e: &DimensionEstimate) {
    let flag = if e.diagnostics.degenerate { " (degenerate)" } else { "" };
    let _ = writeln!(s, "{name}: {}{flag}", fmt_sig(e.value));
}

fn sweep(cfg: &RunConfig, input: &Path, rank: usize) -> Result<Outcome, CliError> {
    let f = read_cloud_file(input)?;
    let dirs = sample_directions(f.dim(), rank, cfg.directions)?;
    let report = projection_sweep(&f, &dirs, cfg.assouad.as_ref(), cfg.threshold)?;
    let out = cfg.out.as_path();
    let json = write_json(&out.join("sweep.json"), &report)?;
    let params = report.rows.first().map_or(0, |r| r.parameter.len());
    let header = (0..params)
        .map(|i| format!("p{i}"))
        .chain(["estimate", "flagged"].map(String::from))
        .collect::<Vec<_>>()
        .join(",");
    let rows = report.rows.iter().enumerate().map(|(i, r)| {
        r.parameter
            .iter()
            .map(|x| fmt_sig(*x))
            .chain([
                fmt_sig(r.estimate.value),
                report.flagged.binary_search(&i).is_ok().to_string(),
            ])
            .collect()
    });
    let csv = write_csv(&out.join("sweep.csv"), &header, rows)?;
    let summary = format!(
        "{} directions, {} below {}; min {}, median {}\n",
        report.rows.len(),
        report.flagged.len(),
        fmt_sig(report.threshold),
        fmt_sig(report.min),
        fmt_sig(report.median)
    );
    Ok(Outcome::ok(vec![json, csv], summary))
}

/// Reads `t,x,y,z` rows; blank lines, `#` comments and a non-numeric header
/// row are skipped.
pub fn read_curve(path: &Path) -> Result<Vec<(f64, [f64; 3])>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = t.split(',').map(str::trim).collect();
        let nums: Result<Vec<f64>, _> = cols.iter().map(|c| c.parse::<f64>()).collect();
        match nums {
            Ok(v) if v.len() == 4 => out.push((v[0], [v[1], v[2], v[3]])),
            Err(_) if out.is_empty() && i == 0 => continue,
            _ => {
                return Err(assouad::Error::Format {
                    line: i + 1,
                    message: format!("expected `t,x,y,z`, got `{t}`"),
                }
                .into())
            }
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct SpanningReport {
    rows: Vec<SpanningRow>,
    spans_everywhere: bool,
    min_abs_det: f64,
    max_abs_det: f64,
}

fn spanning(out: &Path, input: &Path, step: Option<f64>) -> Result<Outcome, CliError> {
    let samples = read_curve(input)?;
    let rows = spanning_check(&samples, step)?;
    let abs = rows.iter().map(|r| r.det.abs());
    let report = SpanningReport {
        spans_everywhere: rows.iter().all(|r| r.spans),
        min_abs_det: abs.clone().fold(f64::INFINITY, f64::min),
        max_abs_det: abs.fold(0.0, f64::max),
        rows,
    };
    let json = write_json(&out.join("spanning.json"), &report)?;
    let csv = write_csv(
        &out.join("spanning.csv"),
        "t,det,spans",
        report
            .rows
            .iter()
            .map(|r| vec![fmt_sig(r.t), fmt_sig(r.det), r.spans.to_string()]),
    )?;
    let summary = format!(
        "spans everywhere: {}; |det| in [{}, {}]\n",
        report.spans_everywhere,
        fmt_sig(report.min_abs_det),
        fmt_sig(report.max_abs_det)
    );
    Ok(Outcome::ok(vec![json, csv], summary))
}

/// Input of `tangent-zoom`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TangentSpec {
    pub construction: ConstructionSpec,
    pub rule: ZoomRule,
    /// Defaults to the unit box.
    #[serde(default)]
    pub window: Option<Window<f64>>,
    /// Inclusive.
    pub k_range: (usize, usize),
    /// Defaults to the grid `{l/2048}` on the line.
    #[serde(default)]
    pub candidate: Option<Candidate>,
    /// Run in exact rational arithmetic.
    #[serde(default)]
    pub exact: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Candidate {
    /// `{l/n : 0 ≤ l ≤ n}`.
    Grid { n: usize },
    Construction { spec: ConstructionSpec },
}

fn tangent_zoom(cfg: &RunConfig, spec: &Path) -> Result<Outcome, CliError> {
    let spec: TangentSpec = read_json(spec)?;
    if spec.exact {
        zoom_with::<Exact>(cfg, &spec)
    } else {
        zoom_with::<f64>(cfg, &spec)
    }
}

fn zoom_with<T: Scalar>(cfg: &RunConfig, spec: &TangentSpec) -> Result<Outcome, CliError> {
    let f: PointCloud<T> = spec.construction.generate(cfg.cap_points)?;
    let window = match &spec.window {
        Some(w) => w.map(|x| T::from_f64_lossy(*x)),
        None => Window::unit_box(f.dim()),
    };
    let candidate: PointCloud<T> = match &spec.candidate {
        Some(Candidate::Construction { spec }) => spec.generate(cfg.cap_points)?,
        Some(Candidate::Grid { n }) => grid_candidate(f.dim(), *n)?,
        None => grid_candidate(f.dim(), 2048)?,
    };
    let seq = ZoomSequence {
        rule: spec.rule.clone(),
        window,
        k_range: spec.k_range,
    };
    let frames = zoom(&f, &seq)?;
    let trace = convergence_trace(&frames, &candidate)?;
    let mut artifacts = vec![write_json(&cfg.out.join("trace.json"), &trace)?];
    for fr in &frames {
        artifacts.push(write_cloud_file(&cfg.out.join(format!("frame_{}.csv", fr.k)), &fr.cloud)?);
    }
    let mut summary = String::from("k,distance,points\n");
    for r in &trace.rows {
        let _ = writeln!(summary, "{},{},{}", r.k, fmt_sig(r.distance), r.points);
    }
    Ok(Outcome::ok(artifacts, summary))
}

fn grid_candidate<T: Scalar>(dim: usize, n: usize) -> Result<PointCloud<T>, CliError> {
    if dim != 1 {
        return Err(CliError::Config(format!(
            "the grid candidate lives on the line; give a construction candidate for dimension {dim}"
        )));
    }
    Ok(uniform_grid(n)?)
}
