//! Reading the Auto MPG data file.
//!
//! The file has one vehicle per line: eight whitespace-separated numeric
//! fields followed by a double-quoted car name. Horsepower is the only field
//! that may hold the missing marker `?`.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::Matrix;

pub const MISSING_MARKER: &str = "?";

/// SHA-256 of the reference `data/auto-mpg.data` shipped with the repository.
pub const REFERENCE_SHA256: &str = "73b50f6b004713ae99465ce469f795ec5172b592c1b9c196569adb245e2ca029";

pub const REFERENCE_ROWS: usize = 398;

/// Default label threshold: vehicles at or above this mpg are "high efficiency".
pub const DEFAULT_THRESHOLD_MPG: f64 = 25.0;

const RAW_FIELDS: [&str; 9] = [
    "mpg",
    "cylinders",
    "displacement",
    "horsepower",
    "weight",
    "acceleration",
    "model_year",
    "origin",
    "car_name",
];

/// Modeling features in file order (mpg and car_name excluded).
pub const FEATURE_NAMES: [&str; 7] = [
    "cylinders",
    "displacement",
    "horsepower",
    "weight",
    "acceleration",
    "model_year",
    "origin",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawRecord {
    pub mpg: f64,
    pub cylinders: i64,
    pub displacement: f64,
    pub horsepower: Option<f64>,
    pub weight: f64,
    pub acceleration: f64,
    pub model_year: i64,
    pub origin: i64,
    pub car_name: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawTable {
    pub rows: Vec<RawRecord>,
}

impl RawTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Row indices whose horsepower is missing.
    pub fn missing_horsepower_rows(&self) -> Vec<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.horsepower.is_none())
            .map(|(i, _)| i)
            .collect()
    }

    /// Re-emits the table in the same text layout [`parse_auto_mpg`] reads.
    pub fn to_data_string(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let hp = r
                .horsepower
                .map_or_else(|| MISSING_MARKER.to_string(), |v| format!("{v:?}"));
            let _ = writeln!(
                out,
                "{:?} {} {:?} {} {:?} {:?} {} {}\t\"{}\"",
                r.mpg, r.cylinders, r.displacement, hp, r.weight, r.acceleration, r.model_year, r.origin, r.car_name
            );
        }
        out
    }
}

fn parse_error(line: usize, field: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        field: field.to_string(),
        message: message.into(),
    }
}

fn parse_number(line: usize, field: &str, token: &str) -> Result<f64> {
    if token == MISSING_MARKER {
        return Err(parse_error(
            line,
            field,
            "missing marker `?` is only allowed in horsepower",
        ));
    }
    let v: f64 = token
        .parse()
        .map_err(|_| parse_error(line, field, format!("`{token}` is not a number")))?;
    if !v.is_finite() {
        return Err(parse_error(line, field, format!("`{token}` is not finite")));
    }
    Ok(v)
}

fn parse_integer(line: usize, field: &str, token: &str) -> Result<i64> {
    let v = parse_number(line, field, token)?;
    if v.fract() != 0.0 {
        return Err(parse_error(line, field, format!("`{token}` is not an integer")));
    }
    Ok(v as i64)
}

fn parse_line(lineno: usize, line: &str) -> Result<RawRecord> {
    let (numeric, name) = match line.find('"') {
        Some(q) => {
            let rest = line[q + 1..].trim_end();
            let name = rest
                .strip_suffix('"')
                .ok_or_else(|| parse_error(lineno, "car_name", "unterminated quoted car name"))?;
            (&line[..q], name)
        }
        None => {
            let found = line.split_whitespace().count();
            return Err(parse_error(
                lineno,
                "car_name",
                format!("expected 9 fields (8 numeric + quoted name), found {found} without a quoted name"),
            ));
        }
    };
    let tokens: Vec<&str> = numeric.split_whitespace().collect();
    if tokens.len() != 8 {
        let field = RAW_FIELDS[tokens.len().min(8)];
        return Err(parse_error(
            lineno,
            field,
            format!("expected 8 numeric fields before the car name, found {}", tokens.len()),
        ));
    }
    let horsepower = if tokens[3] == MISSING_MARKER {
        None
    } else {
        Some(parse_number(lineno, "horsepower", tokens[3])?)
    };
    let rec = RawRecord {
        mpg: parse_number(lineno, "mpg", tokens[0])?,
        cylinders: parse_integer(lineno, "cylinders", tokens[1])?,
        displacement: parse_number(lineno, "displacement", tokens[2])?,
        horsepower,
        weight: parse_number(lineno, "weight", tokens[4])?,
        acceleration: parse_number(lineno, "acceleration", tokens[5])?,
        model_year: parse_integer(lineno, "model_year", tokens[6])?,
        origin: parse_integer(lineno, "origin", tokens[7])?,
        car_name: name.to_string(),
    };
    if ![3, 4, 5, 6, 8].contains(&rec.cylinders) {
        return Err(parse_error(
            lineno,
            "cylinders",
            format!("{} not in {{3,4,5,6,8}}", rec.cylinders),
        ));
    }
    if !(1..=3).contains(&rec.origin) {
        return Err(parse_error(
            lineno,
            "origin",
            format!("{} not in {{1,2,3}}", rec.origin),
        ));
    }
    if !(70..=82).contains(&rec.model_year) {
        return Err(parse_error(
            lineno,
            "model_year",
            format!("{} not in [70, 82]", rec.model_year),
        ));
    }
    Ok(rec)
}

/// Parses the full contents of an auto-mpg data file. Blank lines are skipped;
/// line numbers in errors are 1-based.
pub fn parse_auto_mpg(text: &str) -> Result<RawTable> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        rows.push(parse_line(i + 1, line)?);
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput("no records in data file".into()));
    }
    Ok(RawTable { rows })
}

pub fn read_auto_mpg(path: &Path) -> Result<(RawTable, String)> {
    let bytes = std::fs::read(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: format!("not valid UTF-8: {e}"),
    })?;
    Ok((parse_auto_mpg(&text)?, sha256_hex(&bytes)))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

/// Median of `values`; the mean of the two central order statistics for even counts.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    })
}

pub fn horsepower_median(table: &RawTable) -> Result<f64> {
    let present: Vec<f64> = table.rows.iter().filter_map(|r| r.horsepower).collect();
    median(&present).ok_or(Error::AllMissing)
}

/// Replaces every missing horsepower with the median of the present values.
pub fn impute_horsepower_median(table: &RawTable) -> Result<RawTable> {
    let fill = horsepower_median(table)?;
    let rows = table
        .rows
        .iter()
        .map(|r| RawRecord {
            horsepower: Some(r.horsepower.unwrap_or(fill)),
            ..r.clone()
        })
        .collect();
    Ok(RawTable { rows })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub x: Matrix,
    pub y: Vec<f64>,
    pub label: Vec<u8>,
    pub column_names: Vec<String>,
    pub threshold_mpg: f64,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    /// `mpg` followed by the seven features, as an n×8 matrix.
    pub fn with_target(&self) -> (Matrix, Vec<String>) {
        let mut rows = Vec::with_capacity(self.len());
        for i in 0..self.len() {
            let mut r = Vec::with_capacity(self.x.cols() + 1);
            r.push(self.y[i]);
            r.extend_from_slice(self.x.row(i));
            rows.push(r);
        }
        let mut names = vec!["mpg".to_string()];
        names.extend(self.column_names.iter().cloned());
        (Matrix::from_rows(&rows).expect("rectangular"), names)
    }
}

pub fn label_for(mpg: f64, threshold: f64) -> u8 {
    u8::from(mpg >= threshold)
}

/// Assembles the numeric design matrix, mpg target, and binary label.
pub fn build_dataset(table: &RawTable, threshold_mpg: f64) -> Result<Dataset> {
    if threshold_mpg <= 0.0 || !threshold_mpg.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "threshold must be positive, got {threshold_mpg}"
        )));
    }
    if table.is_empty() {
        return Err(Error::EmptyInput("table has no rows".into()));
    }
    let mut data = Vec::with_capacity(table.len() * FEATURE_NAMES.len());
    for (i, r) in table.rows.iter().enumerate() {
        let hp = r.horsepower.ok_or_else(|| Error::ResidualMissing {
            row: i,
            field: "horsepower".into(),
        })?;
        data.extend_from_slice(&[
            r.cylinders as f64,
            r.displacement,
            hp,
            r.weight,
            r.acceleration,
            r.model_year as f64,
            r.origin as f64,
        ]);
    }
    let y: Vec<f64> = table.rows.iter().map(|r| r.mpg).collect();
    Ok(Dataset {
        x: Matrix::from_vec(table.len(), FEATURE_NAMES.len(), data)?,
        label: y.iter().map(|&v| label_for(v, threshold_mpg)).collect(),
        y,
        column_names: FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
        threshold_mpg,
    })
}
