//! Per-interval rule-based classification over temporal type-2 sets.

mod engine;
mod rule;
mod system;

pub use engine::{select_winner, Association, DegreeTable, Engine, Prediction, TNorm};
pub use rule::{Antecedent, Rule, RuleBase, Vocabulary, MAX_ANTECEDENTS};
pub use system::{FuzzySystem, Mode, Model, Sample, TIME_VARIABLE};
