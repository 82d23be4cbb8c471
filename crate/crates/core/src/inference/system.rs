use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::engine::{DegreeTable, Engine, Prediction};
use super::rule::{RuleBase, Vocabulary};
use crate::bounds::Bounds;
use crate::error::{Result, TxaiError};
use crate::membership::LinguisticVariable;
use crate::temporal::{all_conditional_frequencies, TemporalSettings, TimeAxis, Tt2fs};

/// Name of the extra variable the baseline uses to see the time interval.
pub const TIME_VARIABLE: &str = "Time";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// One rule base per time interval over temporal sets.
    #[default]
    Txai,
    /// One global rule base over non-temporal sets, with time as an extra input.
    Gt2,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Txai => "txai",
            Mode::Gt2 => "gt2",
        })
    }
}

impl FromStr for Mode {
    type Err = TxaiError;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "txai" => Ok(Mode::Txai),
            "gt2" => Ok(Mode::Gt2),
            other => Err(TxaiError::Config(format!("unknown mode '{other}'"))),
        }
    }
}

/// One labelled observation: feature values in variable order, its discrete time point and class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub values: Vec<f64>,
    pub time_point: usize,
    pub class: usize,
}

/// Input variables with their temporal sets, ready to turn instances into degree tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzySystem {
    mode: Mode,
    axis: TimeAxis,
    variables: Vec<LinguisticVariable>,
    sets: Vec<Vec<Tt2fs>>,
    settings: TemporalSettings,
    output: String,
    classes: Vec<String>,
}

impl FuzzySystem {
    /// Builds every label's temporal set from the conditional frequencies observed in `samples`.
    pub fn build(
        mode: Mode,
        axis: &TimeAxis,
        variables: Vec<LinguisticVariable>,
        samples: &[Sample],
        settings: &TemporalSettings,
        output: impl Into<String>,
        classes: Vec<String>,
    ) -> Result<Self> {
        if variables.is_empty() {
            return Err(TxaiError::Config("at least one input variable is required".into()));
        }
        if samples.is_empty() {
            return Err(TxaiError::Input("no samples to build distributions from".into()));
        }
        if classes.is_empty() {
            return Err(TxaiError::Config("at least one class is required".into()));
        }
        for s in samples {
            if s.values.len() != variables.len() {
                return Err(TxaiError::Input(format!(
                    "sample has {} values for {} variables",
                    s.values.len(),
                    variables.len()
                )));
            }
            if s.class >= classes.len() {
                return Err(TxaiError::Input(format!("class index {} out of range", s.class)));
            }
        }
        let set_axis = match mode {
            Mode::Txai => axis.clone(),
            Mode::Gt2 => axis.collapsed(),
        };
        let mut sets = Vec::with_capacity(variables.len());
        for (v, var) in variables.iter().enumerate() {
            let instances: Vec<(f64, usize)> = samples.iter().map(|s| (s.values[v], s.time_point)).collect();
            let freqs = all_conditional_frequencies(&instances, var, &set_axis)?;
            let per_label = freqs
                .iter()
                .enumerate()
                .map(|(j, f)| {
                    if !f.observed {
                        log::warn!("{} is never {}; its set is empty", var.name(), var.label(j).name);
                    }
                    Tt2fs::build(var, j, &set_axis, f, settings)
                })
                .collect::<Result<Vec<_>>>()?;
            sets.push(per_label);
        }
        Ok(Self {
            mode,
            axis: axis.clone(),
            variables,
            sets,
            settings: settings.clone(),
            output: output.into(),
            classes,
        })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn axis(&self) -> &TimeAxis {
        &self.axis
    }

    pub fn variables(&self) -> &[LinguisticVariable] {
        &self.variables
    }

    pub fn sets(&self) -> &[Vec<Tt2fs>] {
        &self.sets
    }

    pub fn set(&self, v: usize, j: usize) -> &Tt2fs {
        &self.sets[v][j]
    }

    pub fn settings(&self) -> &TemporalSettings {
        &self.settings
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn n_bases(&self) -> usize {
        match self.mode {
            Mode::Txai => self.axis.n_intervals(),
            Mode::Gt2 => 1,
        }
    }

    /// Which rule base handles an instance at `time_point`.
    pub fn base_index(&self, time_point: usize) -> usize {
        match self.mode {
            Mode::Txai => self.axis.interval_of(time_point),
            Mode::Gt2 => 0,
        }
    }

    /// Number of antecedent variables, including the time variable of the baseline.
    pub fn n_rule_variables(&self) -> usize {
        self.variables.len() + usize::from(self.mode == Mode::Gt2)
    }

    pub fn vocabulary(&self) -> Vocabulary {
        let mut variables: Vec<(String, Vec<String>)> = self
            .variables
            .iter()
            .map(|v| (v.name().to_string(), v.labels().iter().map(|l| l.name.clone()).collect()))
            .collect();
        if self.mode == Mode::Gt2 {
            variables.push((
                TIME_VARIABLE.to_string(),
                self.axis.intervals().iter().map(|i| i.name.clone()).collect(),
            ));
        }
        Vocabulary { variables, output: self.output.clone(), classes: self.classes.clone() }
    }

    /// Lower/upper degree of label `j` of variable `v` for `x` in interval `q` at level `i`.
    pub fn membership_degree(&self, v: usize, j: usize, x: f64, q: usize, i: usize) -> Result<Bounds> {
        let q = match self.mode {
            Mode::Txai => q,
            Mode::Gt2 => 0,
        };
        self.sets[v][j].envelope(q, i, x)
    }

    /// Degree table of an instance; values outside a variable's universe are a domain error.
    pub fn degree_table(&self, values: &[f64], time_point: usize) -> Result<DegreeTable> {
        self.table(values, time_point, false)
    }

    /// As [`degree_table`](Self::degree_table) but clamps values into each universe first,
    /// for instances that were not seen when the variables were fitted.
    pub fn degree_table_clamped(&self, values: &[f64], time_point: usize) -> Result<DegreeTable> {
        self.table(values, time_point, true)
    }

    fn table(&self, values: &[f64], time_point: usize, clamp: bool) -> Result<DegreeTable> {
        if values.len() != self.variables.len() {
            return Err(TxaiError::Input(format!(
                "instance has {} values for {} variables",
                values.len(),
                self.variables.len()
            )));
        }
        if time_point >= self.axis.len() {
            return Err(TxaiError::Input(format!("time point {time_point} outside the axis")));
        }
        let levels = self.settings.zlevels.len();
        let interval = self.axis.interval_of(time_point);
        let q = match self.mode {
            Mode::Txai => interval,
            Mode::Gt2 => 0,
        };
        let mut offsets = Vec::with_capacity(self.n_rule_variables() + 1);
        offsets.push(0);
        let mut degrees = Vec::new();
        for (v, var) in self.variables.iter().enumerate() {
            let mut x = values[v];
            if clamp && x.is_finite() {
                let (lo, hi) = var.universe();
                x = x.clamp(lo, hi);
            }
            var.check_domain(x)?;
            for (j, label) in var.labels().iter().enumerate() {
                let mu = label.mf.grade(x);
                for i in 0..levels {
                    degrees.push(self.sets[v][j].envelope_from_grade(q, i, mu));
                }
            }
            offsets.push(offsets[v] + var.len());
        }
        if self.mode == Mode::Gt2 {
            for k in 0..self.axis.n_intervals() {
                let d = if k == interval { Bounds::point(1.0) } else { Bounds::ZERO };
                degrees.extend(std::iter::repeat_n(d, levels));
            }
            offsets.push(offsets[self.variables.len()] + self.axis.n_intervals());
        }
        Ok(DegreeTable::from_parts(levels, offsets, degrees))
    }
}

/// A fuzzy system with its learned rule bases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Model {
    pub system: FuzzySystem,
    pub engine: Engine,
    pub bases: Vec<RuleBase>,
}

impl Model {
    pub fn new(system: FuzzySystem, engine: Engine, bases: Vec<RuleBase>) -> Result<Self> {
        if bases.len() != system.n_bases() {
            return Err(TxaiError::Config(format!(
                "{} rule bases for a system needing {}",
                bases.len(),
                system.n_bases()
            )));
        }
        Ok(Self { system, engine, bases })
    }

    pub fn predict(&self, values: &[f64], time_point: usize) -> Result<Prediction> {
        let table = self.system.degree_table_clamped(values, time_point)?;
        self.engine.classify(&self.bases[self.system.base_index(time_point)], &table)
    }

    pub fn render(&self) -> String {
        let vocab = self.system.vocabulary();
        let mut out = String::new();
        for base in &self.bases {
            let title = match base.interval {
                Some(q) => self.system.axis().interval(q).name.clone(),
                None => "All intervals".to_string(),
            };
            out.push_str(&format!("[{title}]\n"));
            out.push_str(&base.render(&vocab));
        }
        out
    }
}
