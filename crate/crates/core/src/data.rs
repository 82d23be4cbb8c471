//! Delimited sensor logs: parsing, validation and time discretisation.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use chrono::{Datelike, NaiveDateTime, Timelike};
use serde::{Deserialize, Serialize};

use crate::error::{Result, TxaiError};
use crate::inference::Sample;
use crate::temporal::TimeAxis;

/// Share of rejected rows above which ingest fails.
pub const MAX_REJECT_SHARE: f64 = 0.10;

const TIMESTAMP_FORMATS: [&str; 2] = ["%Y-%m-%d %H:%M:%S", "%Y-%m-%d %H:%M"];

/// Which columns to read and how labels map to classes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Schema {
    pub timestamp: String,
    pub features: Vec<String>,
    pub label: String,
    /// Raw label values, in class order.
    pub class_values: Vec<String>,
    /// Display names, in class order.
    pub classes: Vec<String>,
    pub delimiter: char,
}

impl Default for Schema {
    fn default() -> Self {
        Self::occupancy()
    }
}

impl Schema {
    /// Temperature, Light and CO2 of the UCI occupancy logs; Humidity columns are ignored.
    pub fn occupancy() -> Self {
        Self {
            timestamp: "date".into(),
            features: vec!["Temperature".into(), "Light".into(), "CO2".into()],
            label: "Occupancy".into(),
            class_values: vec!["0".into(), "1".into()],
            classes: vec!["Not Occupied".into(), "Occupied".into()],
            delimiter: ',',
        }
    }

    fn class_of(&self, raw: &str) -> Option<usize> {
        let raw = raw.trim();
        self.class_values.iter().position(|v| v == raw).or_else(|| {
            let x: f64 = raw.parse().ok()?;
            self.class_values.iter().position(|v| v.parse::<f64>().ok() == Some(x))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub timestamp: NaiveDateTime,
    pub values: Vec<f64>,
    /// `None` when the file carries no label column.
    pub class: Option<usize>,
    pub time_point: usize,
    pub interval: usize,
    /// Days since the common era; consecutive calendar days differ by one.
    pub day: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reject {
    /// 1-based line number in the file, header included.
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct IngestReport {
    pub rows: usize,
    pub accepted: usize,
    pub rejects: Vec<Reject>,
}

impl IngestReport {
    pub fn rejected(&self) -> usize {
        self.rejects.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub schema: Schema,
    pub records: Vec<Record>,
    pub report: IngestReport,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn has_labels(&self) -> bool {
        self.records.iter().all(|r| r.class.is_some())
    }

    /// Labelled samples; errors when any record lacks a label.
    pub fn samples(&self) -> Result<Vec<Sample>> {
        self.records
            .iter()
            .map(|r| {
                let class = r.class.ok_or_else(|| TxaiError::Input("record without a label".into()))?;
                Ok(Sample { values: r.values.clone(), time_point: r.time_point, class })
            })
            .collect()
    }

    pub fn days(&self) -> Vec<i64> {
        self.records.iter().map(|r| r.day).collect()
    }
}

/// Discrete time point of a timestamp on an axis of N points spread evenly over a day.
pub fn time_point(ts: &NaiveDateTime, axis: &TimeAxis) -> usize {
    let minute = (ts.hour() * 60 + ts.minute()) as usize;
    (minute * axis.len() / 1440).min(axis.len() - 1)
}

pub fn parse_timestamp(s: &str) -> Option<NaiveDateTime> {
    let s = s.trim();
    TIMESTAMP_FORMATS.iter().find_map(|f| NaiveDateTime::parse_from_str(s, f).ok())
}

pub fn ingest(path: &Path, schema: &Schema, axis: &TimeAxis) -> Result<Dataset> {
    let file = File::open(path).map_err(|e| TxaiError::Ingest(format!("{}: {e}", path.display())))?;
    ingest_reader(file, schema, axis)
}

/// Parses rows in order. Malformed rows are skipped and reported; more than
/// [`MAX_REJECT_SHARE`] of them is an error. A missing label column is allowed
/// and yields unlabelled records.
pub fn ingest_reader<R: Read>(reader: R, schema: &Schema, axis: &TimeAxis) -> Result<Dataset> {
    if !schema.delimiter.is_ascii() {
        return Err(TxaiError::Config("delimiter must be an ASCII character".into()));
    }
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(schema.delimiter as u8)
        .flexible(true)
        .has_headers(true)
        .from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_string()).collect();
    let column = |name: &str| header.iter().position(|h| h == name);
    let ts_col = column(&schema.timestamp)
        .ok_or_else(|| TxaiError::Ingest(format!("missing timestamp column '{}'", schema.timestamp)))?;
    let feature_cols = schema
        .features
        .iter()
        .map(|f| column(f).ok_or_else(|| TxaiError::Ingest(format!("missing feature column '{f}'"))))
        .collect::<Result<Vec<_>>>()?;
    let label_col = column(&schema.label);

    let mut records = Vec::new();
    let mut report = IngestReport::default();
    for (k, row) in rdr.records().enumerate() {
        let line = k + 2;
        report.rows += 1;
        let row = match row {
            Ok(r) => r,
            Err(e) => {
                report.rejects.push(Reject { line, reason: e.to_string() });
                continue;
            }
        };
        // Files with an unnamed leading row-id column carry one extra field.
        let shift = usize::from(row.len() == header.len() + 1);
        if row.len() != header.len() + shift {
            report.rejects.push(Reject { line, reason: format!("expected {} fields, found {}", header.len(), row.len()) });
            continue;
        }
        let field = |c: usize| row.get(c + shift).unwrap_or("").trim();
        match parse_row(schema, axis, &feature_cols, ts_col, label_col, field) {
            Ok(r) => records.push(r),
            Err(reason) => report.rejects.push(Reject { line, reason }),
        }
    }
    report.accepted = records.len();
    if report.rows > 0 && report.rejected() as f64 > MAX_REJECT_SHARE * report.rows as f64 {
        return Err(TxaiError::Ingest(format!(
            "{} of {} rows rejected (first: line {}: {})",
            report.rejected(),
            report.rows,
            report.rejects[0].line,
            report.rejects[0].reason
        )));
    }
    if report.rejected() > 0 {
        log::warn!("ingest rejected {} of {} rows", report.rejected(), report.rows);
    }
    Ok(Dataset { schema: schema.clone(), records, report })
}

fn parse_row<'r>(
    schema: &Schema,
    axis: &TimeAxis,
    feature_cols: &[usize],
    ts_col: usize,
    label_col: Option<usize>,
    field: impl Fn(usize) -> &'r str,
) -> std::result::Result<Record, String> {
    let timestamp = parse_timestamp(field(ts_col)).ok_or_else(|| format!("bad timestamp '{}'", field(ts_col)))?;
    let mut values = Vec::with_capacity(feature_cols.len());
    for (&c, name) in feature_cols.iter().zip(&schema.features) {
        let raw = field(c);
        let v: f64 = raw.parse().map_err(|_| format!("bad {name} value '{raw}'"))?;
        if !v.is_finite() {
            return Err(format!("non-finite {name} value"));
        }
        values.push(v);
    }
    let class = match label_col {
        Some(c) => Some(schema.class_of(field(c)).ok_or_else(|| format!("unknown label '{}'", field(c)))?),
        None => None,
    };
    let time_point = time_point(&timestamp, axis);
    Ok(Record {
        values,
        class,
        time_point,
        interval: axis.interval_of(time_point),
        day: i64::from(timestamp.date().num_days_from_ce()),
        timestamp,
    })
}
