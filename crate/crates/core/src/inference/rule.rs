use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bounds::Bounds;
use crate::error::{Result, TxaiError};

pub const MAX_ANTECEDENTS: usize = 3;

/// `variable is label`, both as indices into a [`Vocabulary`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Antecedent {
    pub variable: usize,
    pub label: usize,
}

impl Antecedent {
    pub const fn new(variable: usize, label: usize) -> Self {
        Self { variable, label }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    /// Time interval the rule belongs to; `None` for a global rule.
    pub interval: Option<usize>,
    pub antecedents: Vec<Antecedent>,
    pub consequent: usize,
    /// Lower/upper rule weight per z-level.
    pub weights: Vec<Bounds>,
}

impl Rule {
    /// Sorts antecedents by variable and rejects repeated variables.
    pub fn new(
        interval: Option<usize>,
        mut antecedents: Vec<Antecedent>,
        consequent: usize,
        weights: Vec<Bounds>,
    ) -> Result<Self> {
        if antecedents.is_empty() || antecedents.len() > MAX_ANTECEDENTS {
            return Err(TxaiError::Input(format!(
                "a rule needs 1..={MAX_ANTECEDENTS} antecedents, got {}",
                antecedents.len()
            )));
        }
        antecedents.sort();
        if antecedents.windows(2).any(|w| w[0].variable == w[1].variable) {
            return Err(TxaiError::Input("a variable may appear at most once in a rule".into()));
        }
        for w in &weights {
            Bounds::new(w.lower, w.upper)?;
        }
        Ok(Self { interval, antecedents, consequent, weights })
    }

    /// Identity of a rule ignoring its weights.
    pub fn key(&self) -> (Vec<Antecedent>, usize) {
        (self.antecedents.clone(), self.consequent)
    }

    /// Weight at the top z-level, collapsed to its midpoint; used for tie-breaking.
    pub fn top_weight(&self) -> f64 {
        self.weights.last().map_or(0.0, Bounds::midpoint)
    }

    pub fn max_upper_weight(&self) -> f64 {
        self.weights.iter().map(|w| w.upper).fold(0.0, f64::max)
    }

    pub fn render(&self, vocab: &Vocabulary) -> String {
        let mut s = String::from("IF ");
        for (k, a) in self.antecedents.iter().enumerate() {
            if k > 0 {
                s.push_str(" AND ");
            }
            let _ = write!(s, "{} is {}", vocab.variable_name(a.variable), vocab.label_name(a.variable, a.label));
        }
        let _ = write!(s, " THEN {} is {}", vocab.output, vocab.class_name(self.consequent));
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleBase {
    pub interval: Option<usize>,
    pub rules: Vec<Rule>,
}

impl RuleBase {
    pub fn new(interval: Option<usize>, rules: Vec<Rule>) -> Self {
        Self { interval, rules }
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Drops later rules that repeat an earlier antecedent set and consequent.
    pub fn dedup(&mut self) {
        let mut seen = HashSet::new();
        self.rules.retain(|r| seen.insert(r.key()));
    }

    /// Drops rules whose lower and upper weights fall below `threshold` at every level.
    pub fn prune(&mut self, threshold: f64) {
        self.rules.retain(|r| r.max_upper_weight() >= threshold);
    }

    pub fn render(&self, vocab: &Vocabulary) -> String {
        let mut out = String::new();
        for (p, r) in self.rules.iter().enumerate() {
            let _ = writeln!(out, "R{}: {}", p + 1, r.render(vocab));
        }
        out
    }
}

/// Names for variables, their labels and the output classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vocabulary {
    pub variables: Vec<(String, Vec<String>)>,
    pub output: String,
    pub classes: Vec<String>,
}

impl Vocabulary {
    pub fn variable_name(&self, v: usize) -> &str {
        self.variables.get(v).map_or("?", |(n, _)| n.as_str())
    }

    pub fn label_name(&self, v: usize, j: usize) -> &str {
        self.variables.get(v).and_then(|(_, l)| l.get(j)).map_or("?", String::as_str)
    }

    pub fn class_name(&self, c: usize) -> &str {
        self.classes.get(c).map_or("?", String::as_str)
    }

    pub fn labels_per_variable(&self) -> Vec<usize> {
        self.variables.iter().map(|(_, l)| l.len()).collect()
    }
}
