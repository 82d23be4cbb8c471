//! Replay of the worked two-feature, three-rule Morning example: membership
//! degrees and rule weights in, firing strengths, association degrees and the
//! predicted label out, diffed against the published tables.

use serde::Serialize;

use crate::bounds::Bounds;
use crate::error::{Result, TxaiError};
use crate::inference::{Antecedent, DegreeTable, Engine, Rule, RuleBase, TNorm, Vocabulary};
use crate::temporal::ZLevels;

pub const TABLE_TOLERANCE: f64 = 0.001;
pub const CRISP_TOLERANCE: f64 = 0.002;

type Row = [f64; 5];

// Membership degrees of Feature1 = 19.7 and Feature2 = 4.3, [variable][label] = (lower, upper).
const DEGREES: [[(Row, Row); 3]; 2] = [
    [
        ([0.50, 0.52, 0.54, 0.52, 0.51], [0.61, 0.63, 0.64, 0.61, 0.60]),
        ([0.63, 0.63, 0.65, 0.63, 0.61], [0.77, 0.78, 0.78, 0.77, 0.75]),
        ([0.65, 0.64, 0.64, 0.63, 0.63], [0.69, 0.69, 0.68, 0.68, 0.67]),
    ],
    [
        ([0.31, 0.31, 0.31, 0.31, 0.31], [0.32, 0.32, 0.32, 0.32, 0.32]),
        ([0.50, 0.55, 0.55, 0.54, 0.53], [0.58, 0.59, 0.59, 0.58, 0.57]),
        ([0.40, 0.40, 0.40, 0.42, 0.44], [0.43, 0.43, 0.46, 0.46, 0.49]),
    ],
];

const RULE_WEIGHTS: [(Row, Row); 3] = [
    ([0.31, 0.30, 0.30, 0.29, 0.27], [0.35, 0.34, 0.34, 0.31, 0.30]),
    ([0.69, 0.69, 0.68, 0.66, 0.66], [0.73, 0.73, 0.72, 0.72, 0.72]),
    ([0.22, 0.21, 0.21, 0.21, 0.21], [0.24, 0.22, 0.22, 0.22, 0.22]),
];

const FIRING: [(Row, Row); 3] = [
    ([0.25, 0.286, 0.297, 0.281, 0.27], [0.354, 0.372, 0.378, 0.354, 0.342]),
    ([0.315, 0.347, 0.358, 0.34, 0.323], [0.447, 0.46, 0.46, 0.447, 0.427]),
    ([0.26, 0.256, 0.256, 0.265, 0.277], [0.297, 0.297, 0.313, 0.313, 0.328]),
];

const ASSOCIATION: [(Row, Row); 3] = [
    ([0.077, 0.086, 0.089, 0.081, 0.073], [0.124, 0.126, 0.128, 0.11, 0.103]),
    ([0.217, 0.239, 0.243, 0.225, 0.213], [0.326, 0.336, 0.331, 0.322, 0.308]),
    ([0.057, 0.054, 0.054, 0.056, 0.058], [0.071, 0.065, 0.069, 0.069, 0.072]),
];

const CRISP: [f64; 3] = [0.097, 0.274, 0.063];

/// Output1 is class 0, Output2 class 1.
const EXPECTED_LABEL: usize = 0;
const EXPECTED_WINNER: usize = 1;

#[derive(Debug, Clone, Serialize)]
pub struct GoldenCheck {
    pub quantity: String,
    pub expected: f64,
    pub actual: f64,
    pub tolerance: f64,
}

impl GoldenCheck {
    pub fn passed(&self) -> bool {
        (self.expected - self.actual).abs() <= self.tolerance
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GoldenReport {
    pub checks: Vec<GoldenCheck>,
    pub predicted_label: Option<String>,
    pub winner: Option<usize>,
    pub rules: Vec<String>,
}

impl GoldenReport {
    pub fn failures(&self) -> Vec<&GoldenCheck> {
        self.checks.iter().filter(|c| !c.passed()).collect()
    }

    pub fn prediction_matches(&self) -> bool {
        self.winner == Some(EXPECTED_WINNER)
            && self.predicted_label.as_deref() == Some(vocabulary().class_name(EXPECTED_LABEL))
    }

    pub fn is_clean(&self) -> bool {
        self.failures().is_empty() && self.prediction_matches()
    }

    /// Err with a summary of every mismatch.
    pub fn into_result(self) -> Result<Self> {
        if self.is_clean() {
            return Ok(self);
        }
        let mut msg: Vec<String> = self
            .failures()
            .iter()
            .map(|c| format!("{}: expected {} got {:.6}", c.quantity, c.expected, c.actual))
            .collect();
        if !self.prediction_matches() {
            msg.push(format!("prediction {:?} via rule {:?}", self.predicted_label, self.winner));
        }
        Err(TxaiError::Golden(msg.join("; ")))
    }
}

fn bounds(rows: &(Row, Row)) -> Vec<Bounds> {
    rows.0.iter().zip(&rows.1).map(|(&l, &u)| Bounds { lower: l, upper: u }).collect()
}

pub fn vocabulary() -> Vocabulary {
    let labels = || vec!["Low".to_string(), "Medium".to_string(), "High".to_string()];
    Vocabulary {
        variables: vec![("Feature1".into(), labels()), ("Feature2".into(), labels())],
        output: "Output".into(),
        classes: vec!["Output1".into(), "Output2".into()],
    }
}

/// The example's degree table for the Morning instance.
pub fn degree_table() -> DegreeTable {
    let degrees = DEGREES.iter().map(|var| var.iter().map(bounds).collect()).collect();
    DegreeTable::new(degrees).expect("published degrees are well formed")
}

/// R1: Low/Medium -> Output2, R2: Medium/Medium -> Output1, R3: High/High -> Output1.
pub fn rule_base() -> RuleBase {
    let spec = [((0, 1), 1), ((1, 1), 0), ((2, 2), 0)];
    let rules = spec
        .iter()
        .zip(&RULE_WEIGHTS)
        .map(|(&((a, b), c), rw)| {
            Rule::new(Some(0), vec![Antecedent::new(0, a), Antecedent::new(1, b)], c, bounds(rw))
                .expect("published rules are well formed")
        })
        .collect();
    RuleBase::new(Some(0), rules)
}

pub fn replay() -> Result<GoldenReport> {
    let engine = Engine::new(ZLevels::paper_default(), TNorm::Product);
    let table = degree_table();
    let base = rule_base();
    let mut checks = Vec::new();
    let mut push = |quantity: String, expected: f64, actual: f64, tolerance: f64| {
        checks.push(GoldenCheck { quantity, expected, actual, tolerance });
    };
    for (p, rule) in base.rules.iter().enumerate() {
        let w = engine.firing_strength(&rule.antecedents, &table)?;
        let assoc = engine.association(rule, &table)?;
        for i in 0..5 {
            let z = engine.zlevels.levels()[i];
            push(format!("R{} w_lower z={z}", p + 1), FIRING[p].0[i], w[i].lower, TABLE_TOLERANCE);
            push(format!("R{} w_upper z={z}", p + 1), FIRING[p].1[i], w[i].upper, TABLE_TOLERANCE);
            push(format!("R{} h_lower z={z}", p + 1), ASSOCIATION[p].0[i], assoc.per_level[i].lower, TABLE_TOLERANCE);
            push(format!("R{} h_upper z={z}", p + 1), ASSOCIATION[p].1[i], assoc.per_level[i].upper, TABLE_TOLERANCE);
        }
        push(format!("R{} h_crisp", p + 1), CRISP[p], assoc.crisp, CRISP_TOLERANCE);
    }
    let prediction = engine.classify(&base, &table)?;
    let vocab = vocabulary();
    Ok(GoldenReport {
        checks,
        predicted_label: prediction.label.map(|c| vocab.class_name(c).to_string()),
        winner: prediction.winner,
        rules: base.rules.iter().map(|r| r.render(&vocab)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example_reproduces() {
        let report = replay().unwrap();
        for c in report.failures() {
            eprintln!("{c:?}");
        }
        assert!(report.is_clean());
        assert_eq!(report.predicted_label.as_deref(), Some("Output1"));
        assert_eq!(report.winner, Some(1));
    }

    #[test]
    fn renders_published_rules() {
        let report = replay().unwrap();
        assert_eq!(report.rules[0], "IF Feature1 is Low AND Feature2 is Medium THEN Output is Output2");
    }

    #[test]
    fn spot_values() {
        let engine = Engine::new(ZLevels::paper_default(), TNorm::Product);
        let base = rule_base();
        let w = engine.firing_strength(&base.rules[0].antecedents, &degree_table()).unwrap();
        assert!((w[2].lower - 0.297).abs() < 1e-12);
        let a = engine.association(&base.rules[1], &degree_table()).unwrap();
        assert!((a.per_level[0].upper - 0.32602).abs() < 1e-4);
    }
}
