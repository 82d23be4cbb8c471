//! Nested cross-validation on a generated office log, TXAI against the
//! collapsed-time baseline. Pass a CSV path to use a real sensor log instead.
//!
//! cargo run --release --example occupancy -- [log.csv] [repeats]

use std::path::PathBuf;

use txai::config::ExperimentConfig;
use txai::data::{ingest, ingest_reader};
use txai::inference::Mode;
use txai::learner::run_experiment;
use txai::synthetic::{office_log, write_office_log, OfficeConfig};

fn main() -> txai::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().map(PathBuf::from);
    let mut cfg = ExperimentConfig::default();
    cfg.cv.repeats = args.next().and_then(|r| r.parse().ok()).unwrap_or(3);
    let axis = cfg.axis.build()?;
    let data = match &path {
        Some(p) => ingest(p, &cfg.schema, &axis)?,
        None => {
            let mut buf = Vec::new();
            write_office_log(&office_log(&OfficeConfig { days: 21, ..Default::default() }), &mut buf)?;
            ingest_reader(buf.as_slice(), &cfg.schema, &axis)?
        }
    };
    println!("{} rows, {} rejected", data.len(), data.report.rejected());
    let problem = cfg.problem(&data)?;
    for mode in [Mode::Txai, Mode::Gt2] {
        let report = run_experiment(&problem, &cfg.cv, &cfg.ga, mode, cfg.leak_free)?;
        println!("{mode}:");
        for m in ["recall", "f_score", "balanced_accuracy"] {
            println!("  test {m:<18} {:.4}", report.mean("test", m).unwrap_or(f64::NAN));
        }
        let recalls: Vec<String> = report.per_repeat.iter().map(|r| format!("{:.4}", r.test_recall)).collect();
        println!("  per-repeat test recall {}", recalls.join(" "));
    }
    Ok(())
}
