use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cv::{outer_split, stratified_folds, CvPlan};
use super::ga::{learn_rulebase, GaConfig, LearningTask};
use super::metrics::Metrics;
use crate::error::{Result, TxaiError};
use crate::inference::{DegreeTable, Engine, FuzzySystem, Mode, Model, RuleBase, Sample, TNorm};
use crate::membership::{fit_variable, ConceptualLabel, FitPolicy, LinguisticVariable, MembershipFunction};
use crate::stats::{mean, mix_seed, std_dev};
use crate::temporal::{TemporalSettings, TimeAxis};

/// How to obtain one input variable: explicit membership functions, or fitted to data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableDef {
    pub name: String,
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mfs: Option<Vec<MembershipFunction>>,
    /// Defaults to the data range.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub universe: Option<(f64, f64)>,
}

impl VariableDef {
    pub fn fitted(name: &str, labels: &[&str]) -> Self {
        Self { name: name.into(), labels: labels.iter().map(|s| s.to_string()).collect(), mfs: None, universe: None }
    }

    pub fn build(&self, data: &[f64], policy: FitPolicy) -> Result<LinguisticVariable> {
        match &self.mfs {
            None => {
                let var = fit_variable(&self.name, data, &self.labels, policy)?;
                match self.universe {
                    Some(u) => LinguisticVariable::new(&self.name, u, var.labels().to_vec()),
                    None => Ok(var),
                }
            }
            Some(mfs) => {
                if mfs.len() != self.labels.len() {
                    return Err(TxaiError::Config(format!(
                        "{}: {} membership functions for {} labels",
                        self.name,
                        mfs.len(),
                        self.labels.len()
                    )));
                }
                let universe = match self.universe {
                    Some(u) => u,
                    None => data_range(data)?,
                };
                let labels = self.labels.iter().zip(mfs).map(|(n, mf)| ConceptualLabel::new(n, *mf)).collect();
                LinguisticVariable::new(&self.name, universe, labels)
            }
        }
    }
}

fn data_range(data: &[f64]) -> Result<(f64, f64)> {
    let lo = data.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = data.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(lo < hi) {
        return Err(TxaiError::DegenerateData("variable has no spread".into()));
    }
    Ok((lo, hi))
}

/// A classification problem: data plus everything needed to build a fuzzy system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Problem {
    pub axis: TimeAxis,
    pub variables: Vec<VariableDef>,
    pub fit_policy: FitPolicy,
    pub output: String,
    pub classes: Vec<String>,
    /// Class whose recall/precision/f-score are reported; macro averages when absent.
    pub positive: Option<usize>,
    pub temporal: TemporalSettings,
    pub tnorm: TNorm,
    pub samples: Vec<Sample>,
}

impl Problem {
    pub fn engine(&self) -> Engine {
        Engine::new(self.temporal.zlevels.clone(), self.tnorm)
    }

    /// Variables fitted to, and distributions counted on, the samples in `subset`.
    pub fn build_system(&self, mode: Mode, subset: &[usize]) -> Result<FuzzySystem> {
        let samples: Vec<Sample> = subset.iter().map(|&i| self.samples[i].clone()).collect();
        let variables = self
            .variables
            .iter()
            .enumerate()
            .map(|(v, def)| {
                let column: Vec<f64> = samples.iter().map(|s| s.values[v]).collect();
                def.build(&column, self.fit_policy)
            })
            .collect::<Result<Vec<_>>>()?;
        FuzzySystem::build(mode, &self.axis, variables, &samples, &self.temporal, &self.output, self.classes.clone())
    }

    fn all_indices(&self) -> Vec<usize> {
        (0..self.samples.len()).collect()
    }

    fn classes_of(&self) -> Vec<usize> {
        self.samples.iter().map(|s| s.class).collect()
    }

    fn intervals_of(&self) -> Vec<usize> {
        self.samples.iter().map(|s| self.axis.interval_of(s.time_point)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub repeat: usize,
    pub fold: usize,
    pub validation: Metrics,
    pub test: Metrics,
    pub rules: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub repeat: usize,
    pub fold: usize,
    pub base: String,
    pub best_per_generation: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub split: String,
    pub metric: String,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepeatSummary {
    pub repeat: usize,
    pub test_recall: f64,
    pub test_balanced_accuracy: f64,
    pub test_f_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub mode: Mode,
    pub cv_seed: u64,
    pub ga_seed: u64,
    pub leak_free: bool,
    /// Which samples the variables and conditional distributions were derived from.
    pub distributions_from: String,
    pub repeats: usize,
    pub inner_folds: usize,
    pub folds: Vec<FoldResult>,
    pub summary: Vec<SummaryRow>,
    pub per_repeat: Vec<RepeatSummary>,
    pub traces: Vec<TraceRecord>,
}

impl ExperimentReport {
    pub fn mean(&self, split: &str, metric: &str) -> Option<f64> {
        self.summary.iter().find(|r| r.split == split && r.metric == metric).map(|r| r.mean)
    }

    /// `report.json`, `metrics_folds.csv`, `metrics_summary.csv` and `convergence.csv`.
    pub fn write(&self, dir: &Path, header: &str) -> Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("report.json"), serde_json::to_string_pretty(self)? + "\n")?;

        let mut w = csv_writer(&dir.join("metrics_folds.csv"), header)?;
        let mut head = vec!["repeat".to_string(), "fold".to_string(), "rules".to_string()];
        for split in ["validation", "test"] {
            head.extend(Metrics::NAMES.iter().map(|m| format!("{split}_{m}")));
            head.push(format!("{split}_abstentions"));
        }
        w.write_record(&head)?;
        for f in &self.folds {
            let mut rec = vec![f.repeat.to_string(), f.fold.to_string(), f.rules.to_string()];
            for m in [&f.validation, &f.test] {
                rec.extend(m.values().iter().map(|v| v.to_string()));
                rec.push(m.abstentions.to_string());
            }
            w.write_record(&rec)?;
        }
        w.flush()?;

        let mut w = csv_writer(&dir.join("metrics_summary.csv"), header)?;
        w.write_record(["split", "metric", "mean", "std"])?;
        for r in &self.summary {
            w.write_record([r.split.clone(), r.metric.clone(), r.mean.to_string(), r.std.to_string()])?;
        }
        w.flush()?;

        let mut w = csv_writer(&dir.join("convergence.csv"), header)?;
        w.write_record(["repeat", "fold", "base", "generation", "best_balanced_accuracy"])?;
        for t in &self.traces {
            for (g, v) in t.best_per_generation.iter().enumerate() {
                w.write_record([t.repeat.to_string(), t.fold.to_string(), t.base.clone(), g.to_string(), v.to_string()])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// CSV writer whose file starts with `# `-prefixed header lines.
pub fn csv_writer(path: &Path, header: &str) -> Result<csv::Writer<fs::File>> {
    let mut text = String::new();
    for line in header.lines() {
        text.push_str("# ");
        text.push_str(line);
        text.push('\n');
    }
    fs::write(path, text)?;
    let file = fs::OpenOptions::new().append(true).open(path)?;
    Ok(csv::Writer::from_writer(file))
}

struct Prepared {
    system: FuzzySystem,
    tables: Vec<DegreeTable>,
}

fn prepare(problem: &Problem, mode: Mode, subset: &[usize], strict: bool) -> Result<Prepared> {
    let system = problem.build_system(mode, subset)?;
    let tables = problem
        .samples
        .par_iter()
        .map(|s| {
            if strict {
                system.degree_table(&s.values, s.time_point)
            } else {
                system.degree_table_clamped(&s.values, s.time_point)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Prepared { system, tables })
}

struct FoldFit {
    bases: Vec<RuleBase>,
    traces: Vec<(String, Vec<f64>)>,
}

fn base_name(system: &FuzzySystem, b: usize) -> String {
    match system.mode() {
        Mode::Txai => system.axis().interval(b).name.clone(),
        Mode::Gt2 => "All".to_string(),
    }
}

/// One rule base per base index, each learned on the matching training and validation instances.
fn fit_bases(
    problem: &Problem,
    prep: &Prepared,
    engine: &Engine,
    train: &[usize],
    validation: &[usize],
    ga: &GaConfig,
    seed: u64,
) -> Result<FoldFit> {
    let system = &prep.system;
    let labels = system.vocabulary().labels_per_variable();
    let split = |idx: &[usize], b: usize| -> Vec<(&DegreeTable, usize)> {
        idx.iter()
            .filter(|&&i| system.base_index(problem.samples[i].time_point) == b)
            .map(|&i| (&prep.tables[i], problem.samples[i].class))
            .collect()
    };
    let mut bases = Vec::with_capacity(system.n_bases());
    let mut traces = Vec::new();
    for b in 0..system.n_bases() {
        let tr = split(train, b);
        let va = split(validation, b);
        let interval = match system.mode() {
            Mode::Txai => Some(b),
            Mode::Gt2 => None,
        };
        if tr.is_empty() {
            log::warn!("no training data for {}; its rule base stays empty", base_name(system, b));
            bases.push(RuleBase::new(interval, Vec::new()));
            continue;
        }
        let task = LearningTask {
            engine,
            train: &tr,
            validation: &va,
            labels: &labels,
            n_classes: problem.classes.len(),
            interval,
            positive: problem.positive,
        };
        let cfg = GaConfig { seed: mix_seed(seed, b as u64), ..ga.clone() };
        let out = learn_rulebase(&task, &cfg)?;
        traces.push((base_name(system, b), out.trace));
        bases.push(out.rule_base);
    }
    Ok(FoldFit { bases, traces })
}

fn evaluate(
    problem: &Problem,
    prep: &Prepared,
    engine: &Engine,
    bases: &[RuleBase],
    idx: &[usize],
) -> Result<Metrics> {
    let truth: Vec<usize> = idx.iter().map(|&i| problem.samples[i].class).collect();
    let predicted = idx
        .iter()
        .map(|&i| {
            let base = &bases[prep.system.base_index(problem.samples[i].time_point)];
            if base.is_empty() {
                return Ok(None);
            }
            engine.classify(base, &prep.tables[i]).map(|p| p.label)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Metrics::compute(&truth, &predicted, problem.classes.len(), problem.positive))
}

/// Repeated nested cross-validation. Each repeat holds out a stratified test
/// share; every inner fold serves once as validation for rule learning on the
/// remaining folds, and the resulting model is scored on both.
///
/// By default variables and conditional distributions come from the whole
/// dataset; `leak_free` derives them from each repeat's outer-training part.
pub fn run_experiment(
    problem: &Problem,
    plan: &CvPlan,
    ga: &GaConfig,
    mode: Mode,
    leak_free: bool,
) -> Result<ExperimentReport> {
    plan.validate()?;
    ga.validate()?;
    let engine = problem.engine();
    let classes = problem.classes_of();
    let intervals = problem.intervals_of();
    let shared = if leak_free { None } else { Some(prepare(problem, mode, &problem.all_indices(), true)?) };

    let mut folds = Vec::new();
    let mut traces = Vec::new();
    for r in 0..plan.repeats {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(plan.seed, r as u64));
        let (train, test) = outer_split(&classes, &intervals, plan.test_fraction, plan.stratified, &mut rng)?;
        let inner = stratified_folds(&train, &classes, &intervals, plan.inner_folds, plan.stratified, &mut rng)?;
        let local;
        let prep = match &shared {
            Some(p) => p,
            None => {
                local = prepare(problem, mode, &train, false)?;
                &local
            }
        };
        let results = (0..plan.inner_folds)
            .into_par_iter()
            .map(|k| {
                let fit_idx: Vec<usize> =
                    inner.iter().enumerate().filter(|&(j, _)| j != k).flat_map(|(_, f)| f.iter().copied()).collect();
                let seed = mix_seed(mix_seed(ga.seed, r as u64), k as u64);
                let fit = fit_bases(problem, prep, &engine, &fit_idx, &inner[k], ga, seed)?;
                let validation = evaluate(problem, prep, &engine, &fit.bases, &inner[k])?;
                let test = evaluate(problem, prep, &engine, &fit.bases, &test)?;
                let rules = fit.bases.iter().map(RuleBase::len).sum();
                Ok((FoldResult { repeat: r, fold: k, validation, test, rules }, fit.traces))
            })
            .collect::<Result<Vec<_>>>()?;
        for (fold, fold_traces) in results {
            for (base, best) in fold_traces {
                traces.push(TraceRecord { repeat: r, fold: fold.fold, base, best_per_generation: best });
            }
            folds.push(fold);
        }
    }

    let mut summary = Vec::new();
    for split in ["validation", "test"] {
        for (m, name) in Metrics::NAMES.iter().enumerate() {
            let values: Vec<f64> = folds
                .iter()
                .map(|f| if split == "validation" { f.validation.values()[m] } else { f.test.values()[m] })
                .collect();
            summary.push(SummaryRow { split: split.into(), metric: name.to_string(), mean: mean(&values), std: std_dev(&values) });
        }
    }
    let per_repeat = (0..plan.repeats)
        .map(|r| {
            let of = |f: fn(&Metrics) -> f64| {
                mean(&folds.iter().filter(|x| x.repeat == r).map(|x| f(&x.test)).collect::<Vec<_>>())
            };
            RepeatSummary {
                repeat: r,
                test_recall: of(|m| m.recall),
                test_balanced_accuracy: of(|m| m.balanced_accuracy),
                test_f_score: of(|m| m.f_score),
            }
        })
        .collect();

    Ok(ExperimentReport {
        mode,
        cv_seed: plan.seed,
        ga_seed: ga.seed,
        leak_free,
        distributions_from: if leak_free { "outer-train" } else { "full-dataset" }.into(),
        repeats: plan.repeats,
        inner_folds: plan.inner_folds,
        folds,
        summary,
        per_repeat,
        traces,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitOutcome {
    pub model: Model,
    pub validation: Metrics,
    pub traces: Vec<TraceRecord>,
}

/// Learns one model on the whole dataset; one stratified fold of `folds` is the GA's validation set.
pub fn fit_model(problem: &Problem, ga: &GaConfig, mode: Mode, folds: usize, seed: u64) -> Result<FitOutcome> {
    ga.validate()?;
    let engine = problem.engine();
    let all = problem.all_indices();
    let prep = prepare(problem, mode, &all, true)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let parts = stratified_folds(&all, &problem.classes_of(), &problem.intervals_of(), folds, true, &mut rng)?;
    let train: Vec<usize> = parts[1..].iter().flatten().copied().collect();
    let fit = fit_bases(problem, &prep, &engine, &train, &parts[0], ga, mix_seed(ga.seed, seed))?;
    let validation = evaluate(problem, &prep, &engine, &fit.bases, &parts[0])?;
    let traces = fit
        .traces
        .into_iter()
        .map(|(base, best)| TraceRecord { repeat: 0, fold: 0, base, best_per_generation: best })
        .collect();
    let model = Model::new(prep.system, engine, fit.bases)?;
    Ok(FitOutcome { model, validation, traces })
}
