//! TOML experiment configuration.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Schema};
use crate::error::{Result, TxaiError};
use crate::inference::{Mode, TNorm};
use crate::learner::{CvPlan, GaConfig, Problem, VariableDef};
use crate::membership::FitPolicy;
use crate::setops::DEFAULT_GRID_POINTS;
use crate::temporal::{TemporalSettings, TimeAxis, TimeInterval};
use crate::trajectories::FScalar;

/// A named interval of hours, `start` inclusive, `end` exclusive. Wraps past
/// midnight when `end <= start`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalConfig {
    pub name: String,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AxisConfig {
    /// Time points per day.
    pub points: usize,
    pub intervals: Vec<IntervalConfig>,
}

impl Default for AxisConfig {
    fn default() -> Self {
        let iv = |name: &str, start, end| IntervalConfig { name: name.into(), start, end };
        Self { points: 24, intervals: vec![iv("Morning", 0, 11), iv("Daytime", 11, 19), iv("Evening", 19, 24)] }
    }
}

impl AxisConfig {
    pub fn build(&self) -> Result<TimeAxis> {
        let n = self.points;
        let points = (0..n).map(|p| format!("{:02}:{:02}", p * 24 / n.max(1), (p * 1440 / n.max(1)) % 60)).collect();
        let intervals = self
            .intervals
            .iter()
            .map(|iv| {
                if iv.start >= n || iv.end > n {
                    return Err(TxaiError::Config(format!("interval {} lies outside 0..{n}", iv.name)));
                }
                let pts: Vec<usize> =
                    if iv.end > iv.start { (iv.start..iv.end).collect() } else { (iv.start..n).chain(0..iv.end).collect() };
                Ok(TimeInterval::new(iv.name.clone(), pts))
            })
            .collect::<Result<Vec<_>>>()?;
        TimeAxis::new(points, intervals)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    /// Overrides both `cv.seed` and `ga.seed` when present.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub leak_free: bool,
    pub output: String,
    /// Class whose recall, precision and f-score are reported.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub positive: Option<String>,
    pub fit_policy: FitPolicy,
    pub tnorm: TNorm,
    /// Sample count for set operations and centroids.
    pub grid: usize,
    pub fscalar: FScalar,
    pub schema: Schema,
    /// One per schema feature, same order. Empty means Low/Medium/High fitted to each.
    pub variables: Vec<VariableDef>,
    pub axis: AxisConfig,
    pub temporal: TemporalSettings,
    pub ga: GaConfig,
    pub cv: CvPlan,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Txai,
            seed: None,
            leak_free: false,
            output: "Room".into(),
            positive: Some("Occupied".into()),
            fit_policy: FitPolicy::Quantile,
            tnorm: TNorm::Product,
            grid: DEFAULT_GRID_POINTS,
            fscalar: FScalar::Mean,
            schema: Schema::occupancy(),
            variables: Vec::new(),
            axis: AxisConfig::default(),
            temporal: TemporalSettings::default(),
            ga: GaConfig::default(),
            cv: CvPlan::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| TxaiError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let mut cfg: Self = toml::from_str(text).map_err(|e| TxaiError::Config(e.to_string()))?;
        if let Some(seed) = cfg.seed {
            cfg.set_seed(seed);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| TxaiError::Config(e.to_string()))
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.seed = Some(seed);
        self.cv.seed = seed;
        self.ga.seed = seed;
    }

    pub fn validate(&self) -> Result<()> {
        self.axis.build()?;
        self.temporal.validate()?;
        self.ga.validate()?;
        self.cv.validate()?;
        let s = &self.schema;
        if s.classes.len() < 2 || s.classes.len() != s.class_values.len() {
            return Err(TxaiError::Config("schema needs at least two classes, one raw value each".into()));
        }
        if s.features.is_empty() {
            return Err(TxaiError::Config("schema lists no features".into()));
        }
        if !self.variables.is_empty() {
            let names: Vec<&str> = self.variables.iter().map(|v| v.name.as_str()).collect();
            if names != s.features.iter().map(String::as_str).collect::<Vec<_>>() {
                return Err(TxaiError::Config(format!("variables {names:?} do not match features {:?}", s.features)));
            }
        }
        self.positive_index()?;
        if self.grid < 2 {
            return Err(TxaiError::Config("grid needs at least two points".into()));
        }
        Ok(())
    }

    pub fn positive_index(&self) -> Result<Option<usize>> {
        match &self.positive {
            None => Ok(None),
            Some(p) => self
                .schema
                .classes
                .iter()
                .position(|c| c == p)
                .map(Some)
                .ok_or_else(|| TxaiError::Config(format!("positive class '{p}' is not a schema class"))),
        }
    }

    pub fn variable_defs(&self) -> Vec<VariableDef> {
        if !self.variables.is_empty() {
            return self.variables.clone();
        }
        self.schema.features.iter().map(|f| VariableDef::fitted(f, &["Low", "Medium", "High"])).collect()
    }

    pub fn problem(&self, dataset: &Dataset) -> Result<Problem> {
        Ok(Problem {
            axis: self.axis.build()?,
            variables: self.variable_defs(),
            fit_policy: self.fit_policy,
            output: self.output.clone(),
            classes: self.schema.classes.clone(),
            positive: self.positive_index()?,
            temporal: self.temporal.clone(),
            tnorm: self.tnorm,
            samples: dataset.samples()?,
        })
    }
}
