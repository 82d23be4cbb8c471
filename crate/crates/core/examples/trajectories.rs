//! Fits a model on a generated office log, then builds the rule transition
//! matrices around the day and links the most likely rules.

use txai::config::ExperimentConfig;
use txai::data::ingest_reader;
use txai::learner::fit_model;
use txai::synthetic::{office_log, write_office_log, OfficeConfig};
use txai::trajectories::{cycle_rtms, most_likely_trajectory, observe, render_trajectory};

fn main() -> txai::Result<()> {
    let cfg = ExperimentConfig::default();
    let mut buf = Vec::new();
    write_office_log(&office_log(&OfficeConfig { days: 21, ..Default::default() }), &mut buf)?;
    let data = ingest_reader(buf.as_slice(), &cfg.schema, &cfg.axis.build()?)?;
    let problem = cfg.problem(&data)?;
    let model = fit_model(&problem, &cfg.ga, cfg.mode, cfg.cv.inner_folds, cfg.cv.seed)?.model;
    print!("{}", model.render());

    let observations = observe(&model, &problem.samples, &data.days())?;
    let rtms = cycle_rtms(&model, &observations, model.engine.tnorm, cfg.fscalar)?;
    for m in &rtms {
        let (c, d, v) = m.argmax().expect("non-empty bases");
        println!("{} -> {}: {}x{} matrix, strongest R{} -> R{} at {v:.3}", m.from_name, m.to_name, m.rows(), m.cols(), c + 1, d + 1);
    }
    print!("{}", render_trajectory(&model, &most_likely_trajectory(&rtms)?));
    Ok(())
}
