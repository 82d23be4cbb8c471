//! Genetic rule-base learning and the repeated nested cross-validation protocol.

mod cv;
mod experiment;
mod ga;
mod metrics;

pub use cv::{outer_split, stratified_folds, CvPlan};
pub use experiment::*;
pub use ga::{learn_rulebase, GaConfig, GaOutcome, LearningTask};
pub use metrics::Metrics;
