use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use assouad::io::{fmt_sig, write_cloud};
use assouad::{PointCloud, Scalar};
use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

/// Creates `dir` and proves it is writable before any computation starts.
pub fn prepare_out_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let probe = dir.join(".assouad-write-check");
    fs::write(&probe, b"").map_err(|e| CliError::io(&probe, e))?;
    fs::remove_file(&probe).map_err(|e| CliError::io(&probe, e))
}

/// Rounds every float in `v` to 12 significant digits.
pub fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            fmt_sig(x)
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
                .map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_floats).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}

pub fn to_rounded_json<S: Serialize>(value: &S) -> serde_json::Result<String> {
    Ok(serde_json::to_string_pretty(&round_floats(serde_json::to_value(value)?))? + "\n")
}

pub fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<PathBuf, CliError> {
    let text = to_rounded_json(value).map_err(|source| CliError::Json {
        path: path.into(),
        source,
    })?;
    fs::write(path, text).map_err(|e| CliError::io(path, e))?;
    Ok(path.into())
}

pub fn write_csv(path: &Path, header: &str, rows: impl IntoIterator<Item = Vec<String>>) -> Result<PathBuf, CliError> {
    let file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = BufWriter::new(file);
    let io = |e| CliError::io(path, e);
    writeln!(w, "{header}").map_err(io)?;
    for row in rows {
        writeln!(w, "{}", row.join(",")).map_err(io)?;
    }
    w.flush().map_err(io)?;
    Ok(path.into())
}

pub fn write_cloud_file<T: Scalar>(path: &Path, cloud: &PointCloud<T>) -> Result<PathBuf, CliError> {
    let file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = BufWriter::new(file);
    write_cloud(cloud, &mut w)?;
    w.flush().map_err(|e| CliError::io(path, e))?;
    Ok(path.into())
}

pub fn read_cloud_file(path: &Path) -> Result<assouad::Cloud, CliError> {
    let file = fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    Ok(assouad::io::read_cloud(std::io::BufReader::new(file))?)
}

pub fn read_json<D: serde::de::DeserializeOwned>(path: &Path) -> Result<D, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.into(),
        source,
    })
}
