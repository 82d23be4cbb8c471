//! Generated data for examples and tests: an office occupancy log in the
//! layout of the public sensor logs, and a separable two-feature problem.
//!
//! The office log is built so that time matters. Sunlight raises Light
//! during the day whether or not anyone is in, and occupants often leave the
//! lamps off at midday, so Light is a weaker cue in the Daytime than in the
//! Morning or Evening.

use std::io::Write;
use std::path::Path;

use chrono::{Datelike, Duration, NaiveDate, NaiveDateTime, Weekday};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::inference::{Sample, TNorm};
use crate::learner::{Problem, VariableDef};
use crate::membership::FitPolicy;
use crate::temporal::{TemporalSettings, TimeAxis};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OfficeConfig {
    pub days: usize,
    /// Readings per hour, evenly spaced.
    pub per_hour: usize,
    pub start: NaiveDate,
    /// Probability of flipping the recorded label.
    pub label_noise: f64,
    pub seed: u64,
}

impl Default for OfficeConfig {
    fn default() -> Self {
        Self {
            days: 14,
            per_hour: 4,
            start: NaiveDate::from_ymd_opt(2015, 2, 2).expect("valid date"),
            label_noise: 0.01,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OfficeRow {
    pub timestamp: NaiveDateTime,
    pub temperature: f64,
    pub humidity: f64,
    pub light: f64,
    pub co2: f64,
    pub humidity_ratio: f64,
    pub occupancy: u8,
}

fn occupancy_probability(weekend: bool, hour: u32) -> f64 {
    match (weekend, hour) {
        (true, 10..=16) => 0.08,
        (true, _) => 0.01,
        (false, 9..=16) => 0.85,
        (false, 8 | 17) => 0.45,
        (false, 18..=21) => 0.12,
        _ => 0.01,
    }
}

fn sunlight(hour: f64) -> f64 {
    // Winter daylight between roughly 07:30 and 17:30.
    let x = (hour - 7.5) / 10.0;
    if (0.0..=1.0).contains(&x) {
        260.0 * (std::f64::consts::PI * x).sin()
    } else {
        0.0
    }
}

pub fn office_log(cfg: &OfficeConfig) -> Vec<OfficeRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let noise = Normal::new(0.0, 1.0).expect("unit normal");
    let mut rows = Vec::with_capacity(cfg.days * 24 * cfg.per_hour);
    let step = 60 / cfg.per_hour.max(1) as i64;
    for d in 0..cfg.days {
        let date = cfg.start + Duration::days(d as i64);
        let weekend = matches!(date.weekday(), Weekday::Sat | Weekday::Sun);
        let mut co2: f64 = 430.0;
        for hour in 0..24u32 {
            // One presence draw per hour keeps readings within an hour coherent.
            let present = rng.gen_bool(occupancy_probability(weekend, hour));
            let lamps_on = present && (!(10..=15).contains(&hour) || rng.gen_bool(0.45));
            for k in 0..cfg.per_hour {
                let minute = k as i64 * step;
                let timestamp = date.and_hms_opt(hour, 0, 0).expect("valid time") + Duration::minutes(minute);
                let h = f64::from(hour) + minute as f64 / 60.0;
                let target = if present { 820.0 } else { 440.0 };
                co2 += 0.35 * (target - co2) + 12.0 * noise.sample(&mut rng);
                let light = (sunlight(h) * (0.8 + 0.2 * rng.gen::<f64>())
                    + if lamps_on { 420.0 + 25.0 * noise.sample(&mut rng) } else { 0.0 }
                    + 4.0 * noise.sample(&mut rng).abs())
                .max(0.0);
                let temperature =
                    20.2 + 0.9 * f64::from(u8::from(present)) + 0.03 * sunlight(h) / 26.0 + 0.15 * noise.sample(&mut rng);
                let humidity = 26.0 + 1.5 * f64::from(u8::from(present)) + 0.8 * noise.sample(&mut rng);
                let recorded = if rng.gen_bool(cfg.label_noise) { !present } else { present };
                rows.push(OfficeRow {
                    timestamp,
                    temperature: round(temperature, 3),
                    humidity: round(humidity, 3),
                    light: round(light, 1),
                    co2: round(co2.max(380.0), 1),
                    humidity_ratio: round(0.0000374 * humidity * 1.0 + 0.0037, 6),
                    occupancy: u8::from(recorded),
                });
            }
        }
    }
    rows
}

fn round(x: f64, places: i32) -> f64 {
    let s = 10f64.powi(places);
    (x * s).round() / s
}

/// Writes rows in the public logs' layout, including the quoted row-id column.
pub fn write_office_log<W: Write>(rows: &[OfficeRow], mut out: W) -> Result<()> {
    writeln!(out, "\"date\",\"Temperature\",\"Humidity\",\"Light\",\"CO2\",\"HumidityRatio\",\"Occupancy\"")?;
    for (i, r) in rows.iter().enumerate() {
        writeln!(
            out,
            "\"{}\",\"{}\",{},{},{},{},{},{}",
            i + 1,
            r.timestamp.format("%Y-%m-%d %H:%M:%S"),
            r.temperature,
            r.humidity,
            r.light,
            r.co2,
            r.humidity_ratio,
            r.occupancy
        )?;
    }
    Ok(())
}

pub fn write_office_log_file(rows: &[OfficeRow], path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_office_log(rows, std::io::BufWriter::new(file))
}

/// Two features on [0, 10]; the class is 1 exactly when Feature1 is above 7.
/// Feature2 is noise. Time points are spread over the occupancy day.
pub fn separable_problem(n: usize, seed: u64) -> Problem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..n)
        .map(|k| {
            let f1: f64 = rng.gen_range(0.0..10.0);
            let f2: f64 = rng.gen_range(0.0..10.0);
            Sample { values: vec![f1, f2], time_point: k % 24, class: usize::from(f1 > 7.0) }
        })
        .collect();
    let labels = ["Low", "Medium", "High"];
    let mut f1 = VariableDef::fitted("Feature1", &labels);
    let mut f2 = VariableDef::fitted("Feature2", &labels);
    f1.universe = Some((0.0, 10.0));
    f2.universe = Some((0.0, 10.0));
    Problem {
        axis: TimeAxis::occupancy_day(),
        variables: vec![f1, f2],
        fit_policy: FitPolicy::Uniform,
        output: "Output".into(),
        classes: vec!["Output1".into(), "Output2".into()],
        positive: Some(1),
        temporal: TemporalSettings::default(),
        tnorm: TNorm::Product,
        samples,
    }
}
