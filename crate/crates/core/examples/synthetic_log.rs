//! Writes a generated office occupancy log in the public sensor-log layout.
//!
//! cargo run --example synthetic_log -- office.csv [days] [seed]

use std::path::PathBuf;

use txai::synthetic::{office_log, write_office_log_file, OfficeConfig};

fn main() -> txai::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = PathBuf::from(args.next().unwrap_or_else(|| "office.csv".into()));
    let mut cfg = OfficeConfig::default();
    if let Some(d) = args.next() {
        cfg.days = d.parse().map_err(|_| txai::TxaiError::Input(format!("bad day count '{d}'")))?;
    }
    if let Some(s) = args.next() {
        cfg.seed = s.parse().map_err(|_| txai::TxaiError::Input(format!("bad seed '{s}'")))?;
    }
    let rows = office_log(&cfg);
    write_office_log_file(&rows, &path)?;
    let occupied = rows.iter().filter(|r| r.occupancy == 1).count();
    println!("{} rows ({} occupied) over {} days -> {}", rows.len(), occupied, cfg.days, path.display());
    Ok(())
}
