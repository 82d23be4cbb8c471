use serde::{Deserialize, Serialize};

use super::rule::{Antecedent, Rule, RuleBase};
use crate::bounds::Bounds;
use crate::error::{Result, TxaiError};
use crate::setops::{centroid_average, nie_tan};
use crate::temporal::ZLevels;

/// Lower/upper membership of every (variable, label) at every z-level, for one
/// instance in one time interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeTable {
    levels: usize,
    offsets: Vec<usize>,
    degrees: Vec<Bounds>,
}

impl DegreeTable {
    /// `degrees[v][j][i]` is the membership of label `j` of variable `v` at level `i`.
    pub fn new(degrees: Vec<Vec<Vec<Bounds>>>) -> Result<Self> {
        let levels = degrees.first().and_then(|v| v.first()).map_or(0, Vec::len);
        if levels == 0 {
            return Err(TxaiError::Input("degree table needs at least one variable, label and level".into()));
        }
        let mut offsets = Vec::with_capacity(degrees.len() + 1);
        let mut flat = Vec::new();
        offsets.push(0);
        for var in &degrees {
            for per_level in var {
                if per_level.len() != levels {
                    return Err(TxaiError::Input("ragged degree table".into()));
                }
                for b in per_level {
                    if !(0.0 <= b.lower && b.lower <= b.upper && b.upper <= 1.0) {
                        return Err(TxaiError::Ordering { lower: b.lower, upper: b.upper });
                    }
                }
                flat.extend_from_slice(per_level);
            }
            offsets.push(offsets.last().copied().unwrap_or(0) + var.len());
        }
        Ok(Self { levels, offsets, degrees: flat })
    }

    pub(crate) fn from_parts(levels: usize, offsets: Vec<usize>, degrees: Vec<Bounds>) -> Self {
        debug_assert_eq!(degrees.len(), offsets.last().copied().unwrap_or(0) * levels);
        Self { levels, offsets, degrees }
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn n_variables(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn n_labels(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    #[inline]
    pub fn get(&self, a: Antecedent, i: usize) -> Bounds {
        self.degrees[(self.offsets[a.variable] + a.label) * self.levels + i]
    }

    fn check(&self, a: Antecedent) -> Result<()> {
        if a.variable >= self.n_variables() || a.label >= self.n_labels(a.variable) {
            return Err(TxaiError::Input(format!(
                "instance has no degree for variable {} label {}",
                a.variable, a.label
            )));
        }
        Ok(())
    }
}

/// Conjunction used to combine antecedent memberships.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TNorm {
    #[default]
    Product,
    Min,
}

impl TNorm {
    #[inline]
    pub fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            TNorm::Product => a * b,
            TNorm::Min => a.min(b),
        }
    }

    pub fn fold(self, values: impl IntoIterator<Item = f64>) -> f64 {
        values.into_iter().fold(1.0, |acc, v| self.apply(acc, v))
    }
}

/// Per-level and crisp association of one rule with one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Association {
    pub per_level: Vec<Bounds>,
    pub crisp: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    /// Predicted class, `None` when no rule fired.
    pub label: Option<usize>,
    pub winner: Option<usize>,
    /// Crisp association degree of every rule in base order.
    pub crisp: Vec<f64>,
}

impl Prediction {
    pub fn is_abstention(&self) -> bool {
        self.label.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Engine {
    pub zlevels: ZLevels,
    pub tnorm: TNorm,
}

impl Engine {
    pub fn new(zlevels: ZLevels, tnorm: TNorm) -> Self {
        Self { zlevels, tnorm }
    }

    /// Lower/upper firing strength per level.
    pub fn firing_strength(&self, antecedents: &[Antecedent], table: &DegreeTable) -> Result<Vec<Bounds>> {
        self.check_table(table)?;
        for &a in antecedents {
            table.check(a)?;
        }
        Ok(self.firing_unchecked(antecedents, table))
    }

    pub(crate) fn firing_unchecked(&self, antecedents: &[Antecedent], table: &DegreeTable) -> Vec<Bounds> {
        (0..self.zlevels.len())
            .map(|i| {
                let mut lo = 1.0;
                let mut hi = 1.0;
                for &a in antecedents {
                    let d = table.get(a, i);
                    lo = self.tnorm.apply(lo, d.lower);
                    hi = self.tnorm.apply(hi, d.upper);
                }
                Bounds { lower: lo, upper: hi }
            })
            .collect()
    }

    fn check_table(&self, table: &DegreeTable) -> Result<()> {
        if table.levels() != self.zlevels.len() {
            return Err(TxaiError::Input(format!(
                "degree table has {} levels, engine expects {}",
                table.levels(),
                self.zlevels.len()
            )));
        }
        Ok(())
    }

    /// Confidence times support on lower and upper firing strengths, per level.
    ///
    /// Confidence divides the firing mass on instances of `consequent` by the mass
    /// on all instances; support divides the same numerator by the instance count.
    /// A rule that never fires gets weight zero.
    pub fn rule_weight<'a>(
        &self,
        antecedents: &[Antecedent],
        consequent: usize,
        train: impl IntoIterator<Item = (&'a DegreeTable, usize)>,
    ) -> Result<Vec<Bounds>> {
        let levels = self.zlevels.len();
        let mut class_mass = vec![Bounds::ZERO; levels];
        let mut total_mass = vec![Bounds::ZERO; levels];
        let mut count = 0usize;
        for (table, class) in train {
            let w = self.firing_strength(antecedents, table)?;
            for i in 0..levels {
                total_mass[i].lower += w[i].lower;
                total_mass[i].upper += w[i].upper;
                if class == consequent {
                    class_mass[i].lower += w[i].lower;
                    class_mass[i].upper += w[i].upper;
                }
            }
            count += 1;
        }
        if count == 0 {
            return Err(TxaiError::Input("rule weights need training data".into()));
        }
        let n = count as f64;
        let ratio = |num: f64, den: f64| if den > 0.0 { num * num / (den * n) } else { 0.0 };
        Ok((0..levels)
            .map(|i| {
                Bounds::spanning(
                    ratio(class_mass[i].lower, total_mass[i].lower),
                    ratio(class_mass[i].upper, total_mass[i].upper),
                )
            })
            .collect())
    }

    /// Association degrees `w * RW` per level and their crisp value.
    pub fn association(&self, rule: &Rule, table: &DegreeTable) -> Result<Association> {
        if rule.weights.len() != self.zlevels.len() {
            return Err(TxaiError::Input(format!(
                "rule has {} weights, engine expects {}",
                rule.weights.len(),
                self.zlevels.len()
            )));
        }
        let w = self.firing_strength(&rule.antecedents, table)?;
        self.association_from_firing(&w, &rule.weights)
    }

    pub fn association_from_firing(&self, firing: &[Bounds], weights: &[Bounds]) -> Result<Association> {
        let per_level: Vec<Bounds> = firing
            .iter()
            .zip(weights)
            .map(|(w, rw)| Bounds { lower: w.lower * rw.lower, upper: w.upper * rw.upper })
            .collect();
        let avg = centroid_average(&per_level, &self.zlevels)?;
        let crisp = nie_tan(avg.lower, avg.upper)?;
        Ok(Association { per_level, crisp })
    }

    /// Crisp association without the per-level detail; the hot path of learning.
    pub(crate) fn crisp_unchecked(&self, antecedents: &[Antecedent], weights: &[Bounds], table: &DegreeTable) -> f64 {
        let z = self.zlevels.levels();
        let mut lo = 0.0;
        let mut hi = 0.0;
        for (i, rw) in weights.iter().enumerate() {
            let mut wl = 1.0;
            let mut wu = 1.0;
            for &a in antecedents {
                let d = table.get(a, i);
                wl = self.tnorm.apply(wl, d.lower);
                wu = self.tnorm.apply(wu, d.upper);
            }
            lo += z[i] * wl * rw.lower;
            hi += z[i] * wu * rw.upper;
        }
        0.5 * (lo + hi) / self.zlevels.weight_sum()
    }

    pub fn classify(&self, base: &RuleBase, table: &DegreeTable) -> Result<Prediction> {
        if base.is_empty() {
            return Err(TxaiError::Input("cannot classify with an empty rule base".into()));
        }
        let crisp = base
            .rules
            .iter()
            .map(|r| self.association(r, table).map(|a| a.crisp))
            .collect::<Result<Vec<_>>>()?;
        let top: Vec<f64> = base.rules.iter().map(Rule::top_weight).collect();
        let winner = select_winner(&crisp, &top);
        Ok(Prediction { label: winner.map(|p| base.rules[p].consequent), winner, crisp })
    }
}

/// Highest crisp association; ties go to the larger top-level weight, then the
/// lower index. `None` when every association is zero.
pub fn select_winner(crisp: &[f64], top_weight: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (p, &h) in crisp.iter().enumerate() {
        if h <= 0.0 {
            continue;
        }
        match best {
            None => best = Some(p),
            Some(b) => {
                if h > crisp[b] || (h == crisp[b] && top_weight[p] > top_weight[b]) {
                    best = Some(p);
                }
            }
        }
    }
    best
}
