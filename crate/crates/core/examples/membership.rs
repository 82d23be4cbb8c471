//! Fits Low/Medium/High Gaussian labels to a data column and fuzzifies a few readings.

use txai::membership::{fit_variable, FitPolicy};
use txai::synthetic::{office_log, OfficeConfig};

fn main() -> txai::Result<()> {
    let co2: Vec<f64> = office_log(&OfficeConfig::default()).iter().map(|r| r.co2).collect();
    for policy in [FitPolicy::Quantile, FitPolicy::Uniform] {
        let var = fit_variable("CO2", &co2, &["Low", "Medium", "High"], policy)?;
        println!("{policy:?} over {:?}", var.universe());
        for l in var.labels() {
            println!("  {:<6} {:?}", l.name, l.mf);
        }
        for x in [450.0, 620.0, 800.0] {
            let grades: Vec<String> = var.labels().iter().map(|l| format!("{:.3}", l.mf.grade(x))).collect();
            let (j, mu) = var.argmax_col(x)?;
            println!("  x = {x:>5}: [{}] -> {} ({mu:.3})", grades.join(", "), var.label(j).name);
        }
    }
    Ok(())
}
