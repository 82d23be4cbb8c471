//! Rule transition matrices between consecutive time intervals and the chain
//! of most possible transitions.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TxaiError};
use crate::inference::{Antecedent, Mode, Model, Sample, TNorm};
use crate::learner::csv_writer;
use crate::temporal::Tt2fs;

/// How an interval's `g` values are reduced to one frequency per antecedent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FScalar {
    #[default]
    Mean,
    Max,
}

/// Frequency of a label within interval `q`; zero for an unobserved label.
pub fn interval_frequency(set: &Tt2fs, q: usize, how: FScalar) -> f64 {
    if !set.observed() {
        return 0.0;
    }
    let g = set.distribution().g();
    let values: Vec<f64> = set.axis().interval(q).points.iter().map(|&n| g[n]).collect();
    match how {
        FScalar::Mean => values.iter().sum::<f64>() / values.len() as f64,
        FScalar::Max => values.iter().copied().fold(0.0, f64::max),
    }
}

/// Prototypicality of a rule in interval `q`: t-norm of its antecedents' frequencies.
pub fn gamma(antecedents: &[Antecedent], model: &Model, q: usize, tnorm: TNorm, how: FScalar) -> Result<f64> {
    let sets = model.system.sets();
    let mut f = Vec::with_capacity(antecedents.len());
    for a in antecedents {
        let set = sets
            .get(a.variable)
            .and_then(|s| s.get(a.label))
            .ok_or_else(|| TxaiError::Input(format!("no set for variable {} label {}", a.variable, a.label)))?;
        f.push(interval_frequency(set, q, how));
    }
    Ok(tnorm.fold(f))
}

/// Joint possibility of two rules being prototypical in their intervals.
pub fn eta(gamma_c: f64, gamma_d: f64) -> f64 {
    gamma_c * gamma_d
}

/// Which rule won an instance, and when.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observation {
    pub day: i64,
    pub interval: usize,
    /// `None` when the model abstained.
    pub rule: Option<usize>,
}

/// Classifies every sample and records the winning rule of its interval's base.
pub fn observe(model: &Model, samples: &[Sample], days: &[i64]) -> Result<Vec<Observation>> {
    if samples.len() != days.len() {
        return Err(TxaiError::Input("one day index per sample is required".into()));
    }
    samples
        .iter()
        .zip(days)
        .map(|(s, &day)| {
            let interval = model.system.base_index(s.time_point);
            let base = &model.bases[interval];
            let rule = if base.is_empty() { None } else { model.predict(&s.values, s.time_point)?.winner };
            Ok(Observation { day, interval, rule })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleTransitionMatrix {
    pub from: usize,
    pub to: usize,
    pub from_name: String,
    pub to_name: String,
    /// `pi[c][d]`, U rows by V columns.
    pub pi: Vec<Vec<f64>>,
    /// Windows in which rule `c` was seen in `from` and rule `d` in `to`.
    pub counts: Vec<Vec<u64>>,
    /// Sum over windows of the number of distinct `to` rules seen.
    pub total: u64,
    pub gamma_from: Vec<f64>,
    pub gamma_to: Vec<f64>,
}

impl RuleTransitionMatrix {
    pub fn rows(&self) -> usize {
        self.pi.len()
    }

    pub fn cols(&self) -> usize {
        self.pi.first().map_or(0, Vec::len)
    }

    /// Largest entry, ties to the lowest row then column.
    pub fn argmax(&self) -> Option<(usize, usize, f64)> {
        let mut best: Option<(usize, usize, f64)> = None;
        for (c, row) in self.pi.iter().enumerate() {
            for (d, &v) in row.iter().enumerate() {
                if best.is_none_or(|(_, _, b)| v > b) {
                    best = Some((c, d, v));
                }
            }
        }
        best
    }

    pub fn write_csv(&self, path: &Path, header: &str) -> Result<()> {
        let mut w = csv_writer(path, header)?;
        let mut head = vec![format!("{}\\{}", self.from_name, self.to_name)];
        head.extend((0..self.cols()).map(|d| format!("R{}", d + 1)));
        w.write_record(&head)?;
        for (c, row) in self.pi.iter().enumerate() {
            let mut rec = vec![format!("R{}", c + 1)];
            rec.extend(row.iter().map(|v| v.to_string()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `pi[c][d] = eta(gamma_c, gamma_d) * counts[c][d] / total`.
pub fn rtm_from_parts(gamma_from: &[f64], gamma_to: &[f64], counts: &[Vec<u64>], total: u64) -> Result<Vec<Vec<f64>>> {
    if total == 0 {
        return Err(TxaiError::UndefinedTransition { from: "from".into(), to: "to".into() });
    }
    if counts.len() != gamma_from.len() || counts.iter().any(|r| r.len() != gamma_to.len()) {
        return Err(TxaiError::Input("count matrix does not match the rule bases".into()));
    }
    Ok(counts
        .iter()
        .zip(gamma_from)
        .map(|(row, &gc)| row.iter().zip(gamma_to).map(|(&s, &gd)| eta(gc, gd) * s as f64 / total as f64).collect())
        .collect())
}

/// Transition matrix from interval `from` to interval `to`. A window is one day;
/// when `to` precedes `from` on the axis the target is the next day's `to`.
pub fn rtm(
    model: &Model,
    from: usize,
    to: usize,
    observations: &[Observation],
    tnorm: TNorm,
    how: FScalar,
) -> Result<RuleTransitionMatrix> {
    if model.system.mode() != Mode::Txai {
        return Err(TxaiError::Config("transition matrices need per-interval rule bases".into()));
    }
    let q = model.system.axis().n_intervals();
    if from >= q || to >= q {
        return Err(TxaiError::Input(format!("interval pair ({from}, {to}) out of range")));
    }
    let (bu, bv) = (&model.bases[from], &model.bases[to]);
    let shift = i64::from(to <= from);
    let seen = |interval: usize, day: i64| -> BTreeSet<usize> {
        observations
            .iter()
            .filter(|o| o.interval == interval && o.day == day)
            .filter_map(|o| o.rule)
            .collect()
    };
    let days: BTreeSet<i64> = observations.iter().map(|o| o.day).collect();
    let mut counts = vec![vec![0u64; bv.len()]; bu.len()];
    let mut total = 0u64;
    for &day in &days {
        let target = seen(to, day + shift);
        total += target.len() as u64;
        for c in seen(from, day) {
            for &d in &target {
                counts[c][d] += 1;
            }
        }
    }
    let names = |i: usize| model.system.axis().interval(i).name.clone();
    if total == 0 {
        return Err(TxaiError::UndefinedTransition { from: names(from), to: names(to) });
    }
    let gamma_from = bu.rules.iter().map(|r| gamma(&r.antecedents, model, from, tnorm, how)).collect::<Result<Vec<_>>>()?;
    let gamma_to = bv.rules.iter().map(|r| gamma(&r.antecedents, model, to, tnorm, how)).collect::<Result<Vec<_>>>()?;
    let pi = rtm_from_parts(&gamma_from, &gamma_to, &counts, total)?;
    Ok(RuleTransitionMatrix { from, to, from_name: names(from), to_name: names(to), pi, counts, total, gamma_from, gamma_to })
}

/// Matrices for every consecutive pair around the cycle: 0→1, 1→2, ..., (Q-1)→0.
pub fn cycle_rtms(model: &Model, observations: &[Observation], tnorm: TNorm, how: FScalar) -> Result<Vec<RuleTransitionMatrix>> {
    let q = model.system.axis().n_intervals();
    (0..q).map(|i| rtm(model, i, (i + 1) % q, observations, tnorm, how)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryLink {
    pub from: usize,
    pub from_rule: usize,
    pub to: usize,
    pub to_rule: usize,
    pub possibility: f64,
}

/// Per matrix, the transition with the highest possibility.
pub fn most_likely_trajectory(rtms: &[RuleTransitionMatrix]) -> Result<Vec<TrajectoryLink>> {
    for w in rtms.windows(2) {
        if w[0].to != w[1].from {
            return Err(TxaiError::Config(format!(
                "matrices are not chained: {} -> {} then {} -> {}",
                w[0].from, w[0].to, w[1].from, w[1].to
            )));
        }
    }
    rtms.iter()
        .map(|m| {
            let (c, d, v) = m.argmax().ok_or_else(|| TxaiError::Input("empty transition matrix".into()))?;
            Ok(TrajectoryLink { from: m.from, from_rule: c, to: m.to, to_rule: d, possibility: v })
        })
        .collect()
}

/// `Morning R11 -> Daytime R2 (0.218)` style lines.
pub fn render_trajectory(model: &Model, links: &[TrajectoryLink]) -> String {
    let vocab = model.system.vocabulary();
    let axis = model.system.axis();
    let mut out = String::new();
    for l in links {
        out.push_str(&format!(
            "{} R{} -> {} R{} ({:.3})\n",
            axis.interval(l.from).name,
            l.from_rule + 1,
            axis.interval(l.to).name,
            l.to_rule + 1,
            l.possibility
        ));
        out.push_str(&format!("  {}\n", model.bases[l.from].rules[l.from_rule].render(&vocab)));
        out.push_str(&format!("  {}\n", model.bases[l.to].rules[l.to_rule].render(&vocab)));
    }
    out
}
