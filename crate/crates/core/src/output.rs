//! CSV and metadata writers for outage curves.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::curve::{OutageCurve, Source};
use crate::error::UwocError;

pub const CSV_HEADER: [&str; 6] = ["pt_dbm", "gamma0_db", "source", "scheme", "n", "value"];

fn fmt_value(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else {
        format!("{v:.10e}")
    }
}

/// Writes all curves to one CSV, rows in curve order then power order.
pub fn write_csv(path: &Path, curves: &[OutageCurve]) -> Result<(), UwocError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(CSV_HEADER)?;
    for c in curves {
        let n = c.meta.n.to_string();
        for p in c.points() {
            w.write_record([
                format!("{:.3}", p.pt_dbm),
                format!("{:.6}", p.gamma0_db),
                p.source.as_str().to_string(),
                c.meta.scheme.clone(),
                n.clone(),
                fmt_value(p.value),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// One parsed CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub pt_dbm: f64,
    pub gamma0_db: f64,
    pub source: Source,
    pub scheme: String,
    pub n: usize,
    pub value: f64,
}

/// Reads a curve CSV back, checking the header and every field.
pub fn read_csv(path: &Path) -> Result<Vec<CsvRow>, UwocError> {
    let mut r = csv::Reader::from_path(path)?;
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(UwocError::Validation(format!("unexpected CSV header {header:?}")));
    }
    let bad = |line: usize, what: &str| UwocError::Validation(format!("row {line}: bad {what}"));
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        if rec.len() != CSV_HEADER.len() {
            return Err(bad(i + 2, "field count"));
        }
        let num = |k: usize, what: &str| rec[k].parse::<f64>().map_err(|_| bad(i + 2, what));
        let value = num(5, "value")?;
        if !value.is_nan() && !(0.0..=1.0).contains(&value) {
            return Err(bad(i + 2, "value range"));
        }
        rows.push(CsvRow {
            pt_dbm: num(0, "pt_dbm")?,
            gamma0_db: num(1, "gamma0_db")?,
            source: Source::parse(&rec[2]).ok_or_else(|| bad(i + 2, "source"))?,
            scheme: rec[3].to_string(),
            n: rec[4].parse().map_err(|_| bad(i + 2, "n"))?,
            value,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveMetaRecord {
    pub scheme: String,
    pub n: usize,
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convention: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub points: usize,
    pub failed_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub command: String,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    pub curves: Vec<CurveMetaRecord>,
}

/// Sidecar describing how each curve was produced.
pub fn write_meta(path: &Path, command: &str, trials: Option<u64>, curves: &[OutageCurve]) -> Result<(), UwocError> {
    let meta = RunMeta {
        command: command.into(),
        version: crate::VERSION.into(),
        trials,
        curves: curves
            .iter()
            .map(|c| CurveMetaRecord {
                scheme: c.meta.scheme.clone(),
                n: c.meta.n,
                source: c.source.as_str().into(),
                convention: c.meta.convention.clone(),
                seed: c.meta.seed,
                points: c.len(),
                failed_points: c.failed_points(),
            })
            .collect(),
    };
    std::fs::write(path, toml::to_string(&meta).expect("metadata serializes"))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::CurveMeta;

    #[test]
    fn csv_round_trip_with_nan() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.csv");
        let mut c = OutageCurve::new(
            Source::Analytic,
            CurveMeta {
                scheme: "mrc".into(),
                n: 3,
                ..Default::default()
            },
        );
        c.push(-5.0, 45.68, 0.25).unwrap();
        c.push(0.0, 55.68, f64::NAN).unwrap();
        write_csv(&path, &[c]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("pt_dbm,gamma0_db,source,scheme,n,value\n"));
        assert!(text.contains(",nan\n"));
        let rows = read_csv(&path).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].value, 0.25);
        assert_eq!(rows[0].n, 3);
        assert!(rows[1].value.is_nan());
    }
}
