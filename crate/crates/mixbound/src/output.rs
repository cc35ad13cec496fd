//! CSV and JSON artifacts, written atomically.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use mixbound_core::solver::NormSeries;

use crate::error::{HarnessError, Result};

/// Columns of the series CSV, in order.
pub const SERIES_COLUMNS: [&str; 10] = [
    "t",
    "l2",
    "grad_l2",
    "invgrad_l2",
    "lambda",
    "T_l2",
    "eta_l2",
    "boundary_mass",
    "pivot_margin",
    "energy_residual",
];

/// 17 significant digits, enough to round-trip any f64.
pub fn format_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".to_string()
    } else if v > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// Writes `bytes` to a temporary sibling of `path`, then renames it over.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    }
    let name = path.file_name().and_then(|s| s.to_str()).unwrap_or("out");
    let tmp = path.with_file_name(format!(".{name}.tmp{}", std::process::id()));
    let mut f = fs::File::create(&tmp).map_err(|e| HarnessError::io(&tmp, e))?;
    f.write_all(bytes).map_err(|e| HarnessError::io(&tmp, e))?;
    f.sync_all().map_err(|e| HarnessError::io(&tmp, e))?;
    drop(f);
    fs::rename(&tmp, path).map_err(|e| HarnessError::io(path, e))
}

/// Renders a table with a header row.
pub fn csv_bytes(header: &[String], rows: &[Vec<f64>]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let wrap = |e| HarnessError::Csv {
        path: PathBuf::from("<memory>"),
        source: e,
    };
    w.write_record(header).map_err(wrap)?;
    for row in rows {
        w.write_record(row.iter().map(|v| format_f64(*v))).map_err(wrap)?;
    }
    w.into_inner().map_err(|e| HarnessError::Fit(e.to_string()))
}

/// Rows of the series CSV; the energy residual is NaN when it was not computed.
pub fn series_rows(s: &NormSeries) -> Vec<Vec<f64>> {
    (0..s.len())
        .map(|i| {
            vec![
                s.t[i],
                s.l2[i],
                s.grad_l2[i],
                s.invgrad_l2[i],
                s.lambda[i],
                s.heat_l2[i],
                s.eta_l2[i],
                s.boundary_mass[i],
                s.pivot_margin[i],
                s.energy_residual.get(i).copied().unwrap_or(f64::NAN),
            ]
        })
        .collect()
}

pub fn series_column<'a>(s: &'a NormSeries, name: &str) -> Option<&'a [f64]> {
    Some(match name {
        "t" => &s.t,
        "l2" => &s.l2,
        "grad_l2" => &s.grad_l2,
        "invgrad_l2" => &s.invgrad_l2,
        "lambda" => &s.lambda,
        "T_l2" => &s.heat_l2,
        "eta_l2" => &s.eta_l2,
        "boundary_mass" => &s.boundary_mass,
        "pivot_margin" => &s.pivot_margin,
        "energy_residual" => &s.energy_residual,
        _ => return None,
    })
}

pub fn write_series_csv(path: &Path, s: &NormSeries) -> Result<()> {
    let header: Vec<String> = SERIES_COLUMNS.iter().map(|c| c.to_string()).collect();
    write_atomic(path, &csv_bytes(&header, &series_rows(s))?)
}

/// Reads one named column of a CSV file with a header row.
pub fn read_csv_column(path: &Path, column: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let wrap = |e| HarnessError::Csv {
        path: path.to_path_buf(),
        source: e,
    };
    let mut r = csv::Reader::from_path(path).map_err(wrap)?;
    let header = r.headers().map_err(wrap)?.clone();
    let find = |name: &str| header.iter().position(|h| h == name);
    let ti = find("t").ok_or_else(|| HarnessError::Fit(format!("{}: no `t` column", path.display())))?;
    let ci = find(column).ok_or_else(|| {
        HarnessError::Fit(format!(
            "{}: no column `{column}` (have: {})",
            path.display(),
            header.iter().collect::<Vec<_>>().join(", ")
        ))
    })?;
    let mut t = Vec::new();
    let mut y = Vec::new();
    for (row, rec) in r.records().enumerate() {
        let rec = rec.map_err(wrap)?;
        let parse = |i: usize| -> Result<f64> {
            let s = rec.get(i).unwrap_or("");
            s.trim()
                .parse()
                .map_err(|_| HarnessError::Fit(format!("{}: row {}: bad number `{s}`", path.display(), row + 2)))
        };
        t.push(parse(ti)?);
        y.push(parse(ci)?);
    }
    Ok((t, y))
}
