//! End-to-end workflows behind the command-line verbs. Each writes plain
//! text, JSON or CSV artifacts into an output directory, every one of them
//! starting with a header that records the configuration and seed.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::data::{ingest, Dataset};
use crate::error::{Result, TxaiError};
use crate::golden::{self, GoldenReport};
use crate::inference::{Mode, Model};
use crate::learner::{csv_writer, fit_model, run_experiment, ExperimentReport, FitOutcome};
use crate::plots;
use crate::trajectories::{cycle_rtms, most_likely_trajectory, observe, render_trajectory, RuleTransitionMatrix, TrajectoryLink};

/// Effective configuration plus where it came from.
#[derive(Debug, Clone)]
pub struct Run {
    pub config: ExperimentConfig,
    pub source: String,
    pub out: PathBuf,
}

impl Run {
    pub fn seed(&self) -> u64 {
        self.config.seed.unwrap_or(self.config.ga.seed)
    }

    /// One line naming the verb, seed, mode, relation and configuration source.
    pub fn header(&self, verb: &str) -> String {
        format!(
            "txai {verb} seed={} mode={} relation={} leak_free={} config={}",
            self.seed(),
            self.config.mode,
            self.config.temporal.relation,
            self.config.leak_free,
            self.source
        )
    }

    /// Creates the output directory and records the effective configuration in it.
    pub fn prepare(&self, verb: &str) -> Result<()> {
        fs::create_dir_all(&self.out)?;
        let text = format!("# {}\n{}", self.header(verb), self.config.to_toml()?);
        fs::write(self.out.join("config.toml"), text)?;
        Ok(())
    }

    pub fn load(&self, data: &Path) -> Result<Dataset> {
        let ds = ingest(data, &self.config.schema, &self.config.axis.build()?)?;
        log::info!("ingested {} rows, {} rejected", ds.report.accepted, ds.report.rejected());
        Ok(ds)
    }

    fn labelled(&self, data: &Path) -> Result<Dataset> {
        let ds = self.load(data)?;
        if ds.is_empty() {
            return Err(TxaiError::DegenerateData(format!("{} holds no usable rows", data.display())));
        }
        Ok(ds)
    }

    fn fit_on(&self, ds: &Dataset) -> Result<FitOutcome> {
        let problem = self.config.problem(ds)?;
        fit_model(&problem, &self.config.ga, self.config.mode, self.config.cv.inner_folds, self.config.cv.seed)
    }
}

fn write_text(path: &Path, header: &str, body: &str) -> Result<()> {
    fs::write(path, format!("# {header}\n{body}"))?;
    Ok(())
}

fn write_model(model: &Model, path: &Path) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(model)? + "\n")?;
    Ok(())
}

pub fn read_model(path: &Path) -> Result<Model> {
    let text = fs::read_to_string(path).map_err(|e| TxaiError::Input(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

/// Learns one model on all of `data`: `model.json`, `rules.txt`, `convergence.csv`.
pub fn fit(run: &Run, data: &Path) -> Result<FitOutcome> {
    run.prepare("fit")?;
    let header = run.header("fit");
    let ds = run.labelled(data)?;
    let outcome = run.fit_on(&ds)?;
    write_model(&outcome.model, &run.out.join("model.json"))?;
    write_text(&run.out.join("rules.txt"), &header, &outcome.model.render())?;
    let mut w = csv_writer(&run.out.join("convergence.csv"), &header)?;
    w.write_record(["base", "generation", "best_balanced_accuracy"])?;
    for t in &outcome.traces {
        for (g, v) in t.best_per_generation.iter().enumerate() {
            w.write_record([t.base.clone(), g.to_string(), v.to_string()])?;
        }
    }
    w.flush()?;
    Ok(outcome)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InferSummary {
    pub rows: usize,
    pub abstentions: usize,
    /// Share of labelled rows predicted correctly, when labels are present.
    pub accuracy: Option<f64>,
}

/// Classifies every row of `data` into `predictions.csv`.
pub fn infer(run: &Run, model: &Model, data: &Path) -> Result<InferSummary> {
    run.prepare("infer")?;
    let header = run.header("infer");
    let ds = ingest(data, &run.config.schema, model.system.axis())?;
    if ds.is_empty() {
        log::warn!("{} holds no rows to classify", data.display());
    }
    let classes = model.system.classes();
    let mut w = csv_writer(&run.out.join("predictions.csv"), &header)?;
    w.write_record(["timestamp", "interval", "predicted", "rule", "truth"])?;
    let (mut abstentions, mut correct) = (0, 0);
    for r in &ds.records {
        let p = model.predict(&r.values, r.time_point)?;
        abstentions += usize::from(p.label.is_none());
        correct += usize::from(p.label.is_some() && p.label == r.class);
        w.write_record([
            r.timestamp.format("%Y-%m-%d %H:%M:%S").to_string(),
            model.system.axis().interval(r.interval).name.clone(),
            p.label.map_or(String::new(), |c| classes[c].clone()),
            p.winner.map_or(String::new(), |k| format!("R{}", k + 1)),
            r.class.map_or(String::new(), |c| classes[c].clone()),
        ])?;
    }
    w.flush()?;
    let accuracy = (ds.has_labels() && !ds.is_empty()).then(|| correct as f64 / ds.len() as f64);
    Ok(InferSummary { rows: ds.len(), abstentions, accuracy })
}

/// Repeated nested cross-validation; see [`ExperimentReport::write`] for the files.
pub fn eval(run: &Run, data: &Path) -> Result<ExperimentReport> {
    run.prepare("eval")?;
    let ds = run.labelled(data)?;
    let problem = run.config.problem(&ds)?;
    let report = run_experiment(&problem, &run.config.cv, &run.config.ga, run.config.mode, run.config.leak_free)?;
    report.write(&run.out, &run.header("eval"))?;
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct RtmOutcome {
    pub model: Model,
    pub matrices: Vec<RuleTransitionMatrix>,
    pub trajectory: Vec<TrajectoryLink>,
    pub rendering: String,
}

/// Transition matrices around the day and the highest-possibility chain.
/// Uses `model` when given, otherwise fits one on all of `data`.
pub fn rtm(run: &Run, data: &Path, model: Option<Model>) -> Result<RtmOutcome> {
    run.prepare("rtm")?;
    let header = run.header("rtm");
    let ds = run.labelled(data)?;
    let model = match model {
        Some(m) => m,
        None => {
            let m = run.fit_on(&ds)?.model;
            write_model(&m, &run.out.join("model.json"))?;
            m
        }
    };
    if model.system.mode() != Mode::Txai {
        return Err(TxaiError::Config("transition matrices need a txai model with one rule base per interval".into()));
    }
    let observations = observe(&model, &ds.samples()?, &ds.days())?;
    let matrices = cycle_rtms(&model, &observations, model.engine.tnorm, run.config.fscalar)?;
    for m in &matrices {
        m.write_csv(&run.out.join(format!("rtm_{}_{}.csv", m.from_name, m.to_name)), &header)?;
    }
    let trajectory = most_likely_trajectory(&matrices)?;
    let rendering = render_trajectory(&model, &trajectory);
    write_text(&run.out.join("rules.txt"), &header, &model.render())?;
    write_text(&run.out.join("trajectory.txt"), &header, &rendering)?;
    Ok(RtmOutcome { model, matrices, trajectory, rendering })
}

/// Replays the worked example into `golden.csv`; errors when any value is off.
pub fn golden(run: &Run) -> Result<GoldenReport> {
    run.prepare("golden")?;
    let report = golden::replay()?;
    let mut w = csv_writer(&run.out.join("golden.csv"), &run.header("golden"))?;
    w.write_record(["quantity", "expected", "actual", "tolerance", "passed"])?;
    for c in &report.checks {
        w.write_record([
            c.quantity.clone(),
            c.expected.to_string(),
            c.actual.to_string(),
            c.tolerance.to_string(),
            c.passed().to_string(),
        ])?;
    }
    w.flush()?;
    report.into_result()
}

/// Plot grids; with data, also the envelopes of the system built from it.
pub fn dump_plots(run: &Run, data: Option<&Path>) -> Result<Vec<PathBuf>> {
    run.prepare("dump-plots")?;
    let system = match data {
        Some(d) => {
            let ds = run.labelled(d)?;
            let problem = run.config.problem(&ds)?;
            let all: Vec<usize> = (0..problem.samples.len()).collect();
            Some(problem.build_system(run.config.mode, &all)?)
        }
        None => None,
    };
    plots::dump_plots(&run.out, &run.header("dump-plots"), run.config.grid, system.as_ref())
}
