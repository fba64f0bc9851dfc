//! Point-cloud CSV format.
//!
//! ```text
//! # dim=2 resolution=0.001
//! 0.0,0.0
//! 0.5,0.25
//! ```

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::geom::PointCloud;
use crate::scalar::Scalar;

/// Formats with 12 significant digits, dropping trailing zeros.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    let a = rounded.abs();
    if (1e-4..1e15).contains(&a) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

fn parse_header(line: &str) -> Result<(usize, f64)> {
    let body = line
        .trim()
        .strip_prefix('#')
        .ok_or_else(|| Error::Format {
            line: 1,
            message: "missing `# dim=<d> resolution=<δ>` header".into(),
        })?;
    let mut dim = None;
    let mut res = None;
    for tok in body.split_whitespace() {
        if let Some(v) = tok.strip_prefix("dim=") {
            dim = v.parse::<usize>().ok();
        } else if let Some(v) = tok.strip_prefix("resolution=") {
            res = v.parse::<f64>().ok();
        }
    }
    match (dim, res) {
        (Some(d), Some(r)) if d > 0 => Ok((d, r)),
        _ => Err(Error::Format {
            line: 1,
            message: format!("malformed header `{}`", line.trim()),
        }),
    }
}

pub fn read_cloud<R: BufRead>(reader: R) -> Result<PointCloud<f64>> {
    let mut lines = reader.lines();
    let header = lines.next().ok_or_else(|| Error::Format {
        line: 1,
        message: "empty file".into(),
    })??;
    let (dim, resolution) = parse_header(&header)?;
    let mut flat = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        let lineno = i + 2;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let row: Vec<&str> = t.split(',').collect();
        if row.len() != dim {
            return Err(Error::Format {
                line: lineno,
                message: format!("row has {} coordinates, header says dim={dim}", row.len()),
            });
        }
        for v in row {
            flat.push(v.trim().parse::<f64>().map_err(|e| Error::Format {
                line: lineno,
                message: format!("bad coordinate `{v}`: {e}"),
            })?);
        }
    }
    PointCloud::from_flat(dim, flat, resolution)
}

pub fn write_cloud<T: Scalar, W: Write>(cloud: &PointCloud<T>, mut out: W) -> Result<()> {
    writeln!(
        out,
        "# dim={} resolution={}",
        cloud.dim(),
        fmt_sig(cloud.resolution().lossy())
    )?;
    for p in cloud.points() {
        let row: Vec<String> = p.iter().map(|x| fmt_sig(x.lossy())).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}
