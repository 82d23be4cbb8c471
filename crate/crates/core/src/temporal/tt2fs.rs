use serde::{Deserialize, Serialize};

use super::axis::TimeAxis;
use super::frequency::{ConditionalDistribution, ConditionalFrequency, Interpolation};
use super::relation::FuzzyRelation;
use crate::bounds::Bounds;
use crate::error::{check_finite, Result, TxaiError};
use crate::membership::{LinguisticVariable, MembershipFunction};
use crate::stats::{quantile_sorted, sorted_copy};

pub const DEFAULT_SHRINK: f64 = 0.5;

/// Strictly increasing secondary grades `z_1 < ... < z_I` in (0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ZLevels(Vec<f64>);

impl TryFrom<Vec<f64>> for ZLevels {
    type Error = TxaiError;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        ZLevels::new(v)
    }
}

impl From<ZLevels> for Vec<f64> {
    fn from(z: ZLevels) -> Self {
        z.0
    }
}

impl Default for ZLevels {
    fn default() -> Self {
        Self::paper_default()
    }
}

impl ZLevels {
    pub fn new(levels: Vec<f64>) -> Result<Self> {
        if levels.is_empty() {
            return Err(TxaiError::Config("at least one z-level is required".into()));
        }
        for &z in &levels {
            if !(z > 0.0 && z <= 1.0) {
                return Err(TxaiError::Config(format!("z-level {z} outside (0, 1]")));
            }
        }
        if levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(TxaiError::Config(format!("z-levels must be strictly increasing: {levels:?}")));
        }
        Ok(Self(levels))
    }

    /// `{0.2, 0.4, 0.6, 0.8, 1.0}`
    pub fn paper_default() -> Self {
        Self(vec![0.2, 0.4, 0.6, 0.8, 1.0])
    }

    pub fn levels(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn top(&self) -> usize {
        self.0.len() - 1
    }

    pub fn weight_sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Quantile offset per level: `0.5 * shrink * (z_i - z_1) / (z_I - z_1)`, zero when I = 1.
    pub fn alphas(&self, shrink: f64) -> Vec<f64> {
        let (z1, zi) = (self.0[0], self.0[self.0.len() - 1]);
        self.0
            .iter()
            .map(|&z| if zi > z1 { 0.5 * shrink * (z - z1) / (zi - z1) } else { 0.0 })
            .collect()
    }
}

/// Everything besides the data that shapes a temporal set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TemporalSettings {
    pub zlevels: ZLevels,
    pub relation: FuzzyRelation,
    pub interpolation: Interpolation,
    /// Fraction of each interval's frequency spread trimmed away at the top z-level.
    pub shrink: f64,
}

impl Default for TemporalSettings {
    fn default() -> Self {
        Self {
            zlevels: ZLevels::paper_default(),
            relation: FuzzyRelation::default(),
            interpolation: Interpolation::default(),
            shrink: DEFAULT_SHRINK,
        }
    }
}

impl TemporalSettings {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.shrink) {
            return Err(TxaiError::Config(format!("shrink factor {} outside [0, 1]", self.shrink)));
        }
        Ok(())
    }
}

/// A conceptual label's temporal type-2 fuzzy set in time-slice/z-slice form.
///
/// Per interval `q` and level `i` it keeps the frequency band `[Q(alpha_i), Q(1 - alpha_i)]`
/// of the interval's `g` values; the membership envelope at `x` is that band pushed
/// through the relation together with `mu(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tt2fs {
    variable: String,
    label: String,
    universe: (f64, f64),
    mf: MembershipFunction,
    axis: TimeAxis,
    dist: ConditionalDistribution,
    observed: bool,
    zlevels: ZLevels,
    relation: FuzzyRelation,
    shrink: f64,
    bands: Vec<Vec<Bounds>>,
}

impl Tt2fs {
    pub fn build(
        var: &LinguisticVariable,
        label: usize,
        axis: &TimeAxis,
        freq: &ConditionalFrequency,
        settings: &TemporalSettings,
    ) -> Result<Self> {
        settings.validate()?;
        if label >= var.len() {
            return Err(TxaiError::Input(format!("label index {label} out of range for {}", var.name())));
        }
        if freq.g.len() != axis.len() {
            return Err(TxaiError::Config(format!(
                "frequency has {} points but the axis has {}",
                freq.g.len(),
                axis.len()
            )));
        }
        let dist = ConditionalDistribution::new(freq.g.clone(), settings.interpolation)?;
        let alphas = settings.zlevels.alphas(settings.shrink);
        let mut bands = Vec::with_capacity(axis.n_intervals());
        for interval in axis.intervals() {
            if interval.points.is_empty() {
                return Err(TxaiError::Config(format!("interval {} has no time points", interval.name)));
            }
            let f_q: Vec<f64> = interval.points.iter().map(|&n| freq.g[n]).collect();
            let sorted = sorted_copy(&f_q);
            let per_level = alphas
                .iter()
                .map(|&a| {
                    if freq.observed {
                        Bounds::spanning(quantile_sorted(&sorted, a), quantile_sorted(&sorted, 1.0 - a))
                    } else {
                        Bounds::ZERO
                    }
                })
                .collect();
            bands.push(per_level);
        }
        let l = var.label(label);
        Ok(Self {
            variable: var.name().to_string(),
            label: l.name.clone(),
            universe: var.universe(),
            mf: l.mf,
            axis: axis.clone(),
            dist,
            observed: freq.observed,
            zlevels: settings.zlevels.clone(),
            relation: settings.relation,
            shrink: settings.shrink,
            bands,
        })
    }

    pub fn variable(&self) -> &str {
        &self.variable
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn universe(&self) -> (f64, f64) {
        self.universe
    }

    pub fn mf(&self) -> &MembershipFunction {
        &self.mf
    }

    pub fn axis(&self) -> &TimeAxis {
        &self.axis
    }

    pub fn distribution(&self) -> &ConditionalDistribution {
        &self.dist
    }

    pub fn observed(&self) -> bool {
        self.observed
    }

    pub fn zlevels(&self) -> &ZLevels {
        &self.zlevels
    }

    pub fn relation(&self) -> FuzzyRelation {
        self.relation
    }

    pub fn shrink(&self) -> f64 {
        self.shrink
    }

    /// Frequency band of interval `q` at level `i`.
    pub fn band(&self, q: usize, i: usize) -> Bounds {
        self.bands[q][i]
    }

    fn check_x(&self, x: f64) -> Result<()> {
        check_finite(x, "feature value")?;
        let (lo, hi) = self.universe;
        if x < lo || x > hi {
            return Err(TxaiError::Domain { value: x, lo, hi });
        }
        Ok(())
    }

    /// Lower/upper membership of `x` in interval `q` at level `i`.
    pub fn envelope(&self, q: usize, i: usize, x: f64) -> Result<Bounds> {
        self.check_x(x)?;
        if q >= self.bands.len() || i >= self.zlevels.len() {
            return Err(TxaiError::Input(format!("slice ({q}, {i}) out of range")));
        }
        Ok(self.envelope_from_grade(q, i, self.mf.grade(x)))
    }

    /// Envelope for an already evaluated primary grade `mu`.
    #[inline]
    pub fn envelope_from_grade(&self, q: usize, i: usize, mu: f64) -> Bounds {
        if !self.observed {
            return Bounds::ZERO;
        }
        let band = self.bands[q][i];
        Bounds::spanning(
            self.relation.apply_unchecked(band.lower, mu),
            self.relation.apply_unchecked(band.upper, mu),
        )
    }

    /// Temporal membership `rel(f(t), mu(x))` with this set's own relation.
    pub fn eval_tmf(&self, x: f64, t: f64) -> Result<f64> {
        self.eval_tmf_with(x, t, self.relation)
    }

    pub fn eval_tmf_with(&self, x: f64, t: f64, rel: FuzzyRelation) -> Result<f64> {
        self.check_x(x)?;
        let f = self.dist.eval(t)?;
        if !self.observed {
            return Ok(0.0);
        }
        Ok(rel.apply_unchecked(f, self.mf.grade(x)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::membership::ConceptualLabel;
    use crate::temporal::axis::TimeInterval;

    fn var() -> LinguisticVariable {
        LinguisticVariable::new(
            "Temperature",
            (-10.0, 40.0),
            vec![
                ConceptualLabel::new("Cold", MembershipFunction::gaussian(8.0, 4.0).unwrap()),
                ConceptualLabel::new("Warm", MembershipFunction::gaussian(25.0, 8.0).unwrap()),
            ],
        )
        .unwrap()
    }

    fn three_point_axis() -> TimeAxis {
        TimeAxis::new(
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            vec![TimeInterval::new("first", 0..3), TimeInterval::new("second", 3..4)],
        )
        .unwrap()
    }

    fn freq(g: Vec<f64>) -> ConditionalFrequency {
        let observed = g.iter().any(|&v| v > 0.0);
        ConditionalFrequency { g, observed }
    }

    #[test]
    fn zlevels_validation() {
        assert!(ZLevels::new(vec![]).is_err());
        assert!(ZLevels::new(vec![0.0, 0.5]).is_err());
        assert!(ZLevels::new(vec![0.5, 0.5]).is_err());
        assert!(ZLevels::new(vec![0.5, 1.1]).is_err());
        assert!((ZLevels::paper_default().weight_sum() - 3.0).abs() < 1e-12);
        assert_eq!(ZLevels::new(vec![0.7]).unwrap().alphas(0.5), vec![0.0]);
    }

    #[test]
    fn quantile_table_for_three_points() {
        let set = Tt2fs::build(
            &var(),
            0,
            &three_point_axis(),
            &freq(vec![0.2, 0.6, 1.0, 0.5]),
            &TemporalSettings::default(),
        )
        .unwrap();
        // alpha = {0, 1/16, 1/8, 3/16, 1/4}; Q(a) = 0.2 + 0.8 a over sorted {0.2, 0.6, 1.0}
        let table = [(0.2, 1.0), (0.25, 0.95), (0.3, 0.9), (0.35, 0.85), (0.4, 0.8)];
        for (i, &(lo, hi)) in table.iter().enumerate() {
            let env = set.envelope(0, i, 8.0).unwrap();
            assert!((env.lower - lo).abs() < 1e-12 && (env.upper - hi).abs() < 1e-12, "level {i}: {env:?}");
        }
    }

    #[test]
    fn constant_interval_collapses() {
        let set = Tt2fs::build(&var(), 0, &three_point_axis(), &freq(vec![0.4, 0.4, 0.4, 1.0]), &TemporalSettings::default())
            .unwrap();
        for i in 0..5 {
            let env = set.envelope(0, i, 10.0).unwrap();
            assert_eq!(env.lower, env.upper);
        }
    }

    #[test]
    fn first_level_is_min_max() {
        let g = vec![0.3, 0.9, 0.5, 1.0];
        let set = Tt2fs::build(&var(), 0, &three_point_axis(), &freq(g), &TemporalSettings::default()).unwrap();
        let mu = MembershipFunction::gaussian(8.0, 4.0).unwrap().grade(12.0);
        let env = set.envelope(0, 0, 12.0).unwrap();
        assert!((env.lower - 0.3 * mu).abs() < 1e-15);
        assert!((env.upper - 0.9 * mu).abs() < 1e-15);
    }

    #[test]
    fn unobserved_label_has_zero_membership() {
        let set = Tt2fs::build(&var(), 1, &three_point_axis(), &freq(vec![0.0; 4]), &TemporalSettings::default()).unwrap();
        assert!(!set.observed());
        assert_eq!(set.envelope(1, 4, 25.0).unwrap(), Bounds::ZERO);
        assert_eq!(set.eval_tmf(25.0, 1.5).unwrap(), 0.0);
    }

    #[test]
    fn tmf_of_reference_point() {
        let axis = TimeAxis::new(
            (0..12).map(|m| m.to_string()).collect(),
            vec![TimeInterval::new("year", 0..12)],
        )
        .unwrap();
        let g = vec![0.85, 1.0, 0.6, 0.55, 0.4, 0.55, 0.1, 0.0, 0.15, 0.35, 0.75, 0.95];
        let set = Tt2fs::build(&var(), 0, &axis, &freq(g), &TemporalSettings::default()).unwrap();
        let v = set.eval_tmf(15.0, 0.0).unwrap();
        assert!((v - 0.1838253918054042).abs() < 1e-12);
        assert_eq!(set.eval_tmf(8.0, 1.0).unwrap(), 1.0);
        assert!(matches!(set.eval_tmf(8.0, 12.5), Err(TxaiError::Domain { .. })));
        assert!(matches!(set.eval_tmf(41.0, 1.0), Err(TxaiError::Domain { .. })));
    }

    #[test]
    fn decreasing_relations_still_nest() {
        let g = vec![0.1, 0.7, 0.4, 1.0];
        for rel in FuzzyRelation::ALL {
            let settings = TemporalSettings { relation: rel, ..TemporalSettings::default() };
            let set = Tt2fs::build(&var(), 0, &three_point_axis(), &freq(g.clone()), &settings).unwrap();
            for k in 0..=50 {
                let x = -10.0 + k as f64;
                for i in 1..5 {
                    let outer = set.envelope(0, i - 1, x).unwrap();
                    let inner = set.envelope(0, i, x).unwrap();
                    assert!(outer.contains(&inner), "{rel} x={x} level {i}");
                }
            }
        }
    }

    #[test]
    fn length_mismatch_is_config_error() {
        let r = Tt2fs::build(&var(), 0, &three_point_axis(), &freq(vec![1.0; 3]), &TemporalSettings::default());
        assert!(matches!(r, Err(TxaiError::Config(_))));
    }
}
