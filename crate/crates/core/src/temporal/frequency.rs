//! Conditional relative frequency of a label over time and its continuous
//! interpolation.

use serde::{Deserialize, Serialize};

use super::axis::TimeAxis;
use crate::error::{check_finite, check_unit, Result, TxaiError};
use crate::membership::LinguisticVariable;

/// Mode-normalised occurrence counts of one label at each discrete time point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionalFrequency {
    pub g: Vec<f64>,
    /// False when the label never won the argmax anywhere; `g` is then all zeros.
    pub observed: bool,
}

impl ConditionalFrequency {
    /// Divides every count by the largest one.
    pub fn from_counts(counts: &[u64]) -> Self {
        let mode = counts.iter().copied().max().unwrap_or(0);
        if mode == 0 {
            return Self { g: vec![0.0; counts.len()], observed: false };
        }
        let g = counts.iter().map(|&c| c as f64 / mode as f64).collect();
        Self { g, observed: true }
    }
}

/// Counts, per time point, how many instances have `label` as their
/// maximal-membership label, normalised by the mode over all points.
///
/// Instances are `(x, time point index)` pairs.
pub fn conditional_relative_frequency(
    instances: &[(f64, usize)],
    var: &LinguisticVariable,
    label: usize,
    axis: &TimeAxis,
) -> Result<ConditionalFrequency> {
    if label >= var.len() {
        return Err(TxaiError::Input(format!("label index {label} out of range for {}", var.name())));
    }
    let counts = label_counts(instances, var, axis)?;
    let freq = ConditionalFrequency::from_counts(&counts[label]);
    if !freq.observed {
        log::warn!("label {} of {} is never observed", var.label(label).name, var.name());
    }
    Ok(freq)
}

/// All labels of a variable in one pass over the data.
pub fn all_conditional_frequencies(
    instances: &[(f64, usize)],
    var: &LinguisticVariable,
    axis: &TimeAxis,
) -> Result<Vec<ConditionalFrequency>> {
    let counts = label_counts(instances, var, axis)?;
    Ok(counts.iter().map(|c| ConditionalFrequency::from_counts(c)).collect())
}

fn label_counts(instances: &[(f64, usize)], var: &LinguisticVariable, axis: &TimeAxis) -> Result<Vec<Vec<u64>>> {
    let mut counts = vec![vec![0u64; axis.len()]; var.len()];
    for &(x, n) in instances {
        if n >= axis.len() {
            return Err(TxaiError::Input(format!("time point {n} outside axis of {} points", axis.len())));
        }
        let (j, _) = var.argmax_col(x)?;
        counts[j][n] += 1;
    }
    Ok(counts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Interpolation {
    #[default]
    Linear,
    /// Fritsch-Butland monotone piecewise cubic Hermite; never overshoots its data.
    MonotoneCubic,
}

/// Continuous, periodic interpolant `f` through the discrete `g` values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistributionSpec", into = "DistributionSpec")]
pub struct ConditionalDistribution {
    g: Vec<f64>,
    method: Interpolation,
    slopes: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct DistributionSpec {
    g: Vec<f64>,
    method: Interpolation,
}

impl TryFrom<DistributionSpec> for ConditionalDistribution {
    type Error = TxaiError;
    fn try_from(s: DistributionSpec) -> Result<Self> {
        ConditionalDistribution::new(s.g, s.method)
    }
}

impl From<ConditionalDistribution> for DistributionSpec {
    fn from(d: ConditionalDistribution) -> Self {
        DistributionSpec { g: d.g, method: d.method }
    }
}

impl ConditionalDistribution {
    pub fn new(g: Vec<f64>, method: Interpolation) -> Result<Self> {
        if g.is_empty() {
            return Err(TxaiError::Input("conditional distribution needs at least one point".into()));
        }
        for &v in &g {
            check_unit(v, "conditional relative frequency")?;
        }
        let slopes = match method {
            Interpolation::Linear => Vec::new(),
            Interpolation::MonotoneCubic => monotone_slopes(&g),
        };
        Ok(Self { g, method, slopes })
    }

    pub fn g(&self) -> &[f64] {
        &self.g
    }

    pub fn method(&self) -> Interpolation {
        self.method
    }

    pub fn len(&self) -> usize {
        self.g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g.is_empty()
    }

    /// `f(t)` for `t` in `[0, N]`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        check_finite(t, "time")?;
        let n = self.g.len() as f64;
        if !(0.0..=n).contains(&t) {
            return Err(TxaiError::Domain { value: t, lo: 0.0, hi: n });
        }
        Ok(self.eval_wrapped(t))
    }

    /// `f(t)` with `t` reduced modulo N.
    pub fn eval_wrapped(&self, t: f64) -> f64 {
        let n = self.g.len();
        let t = t.rem_euclid(n as f64);
        let k = (t.floor() as usize).min(n - 1);
        let s = t - k as f64;
        let (y0, y1) = (self.g[k], self.g[(k + 1) % n]);
        let v = match self.method {
            Interpolation::Linear => y0 + s * (y1 - y0),
            Interpolation::MonotoneCubic => {
                let (m0, m1) = (self.slopes[k], self.slopes[(k + 1) % n]);
                let s2 = s * s;
                let s3 = s2 * s;
                (2.0 * s3 - 3.0 * s2 + 1.0) * y0
                    + (s3 - 2.0 * s2 + s) * m0
                    + (-2.0 * s3 + 3.0 * s2) * y1
                    + (s3 - s2) * m1
            }
        };
        v.clamp(0.0, 1.0)
    }
}

/// Periodic Fritsch-Butland tangents on a unit-spaced grid.
fn monotone_slopes(g: &[f64]) -> Vec<f64> {
    let n = g.len();
    if n < 2 {
        return vec![0.0; n];
    }
    let secant = |k: usize| g[(k + 1) % n] - g[k];
    (0..n)
        .map(|k| {
            let d0 = secant((k + n - 1) % n);
            let d1 = secant(k);
            if d0 * d1 <= 0.0 {
                0.0
            } else {
                2.0 * d0 * d1 / (d0 + d1)
            }
        })
        .collect()
}
