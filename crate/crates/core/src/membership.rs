//! Type-1 membership functions, conceptual labels and linguistic variables.
//!
//! Everything here is immutable once constructed; the temporal layer builds
//! on top of [`LinguisticVariable`] and never mutates it.

use serde::{Deserialize, Serialize};

use crate::error::{check_finite, Result, TxaiError};
use crate::stats::{quantile_sorted, sorted_copy};

/// Default number of grid points used by the universe coverage check.
pub const DEFAULT_COVERAGE_RESOLUTION: usize = 1000;

/// A convex type-1 membership function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MembershipFunction {
    Gaussian { center: f64, sigma: f64 },
    Trapezoid { a: f64, b: f64, c: f64, d: f64 },
    Triangular { a: f64, b: f64, c: f64 },
    /// 1 up to `a`, falling linearly to 0 at `b`.
    LeftShoulder { a: f64, b: f64 },
    /// 0 up to `a`, rising linearly to 1 at `b`.
    RightShoulder { a: f64, b: f64 },
}

impl MembershipFunction {
    pub fn gaussian(center: f64, sigma: f64) -> Result<Self> {
        Self::Gaussian { center, sigma }.validated()
    }

    pub fn trapezoid(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::Trapezoid { a, b, c, d }.validated()
    }

    pub fn triangular(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::Triangular { a, b, c }.validated()
    }

    pub fn left_shoulder(a: f64, b: f64) -> Result<Self> {
        Self::LeftShoulder { a, b }.validated()
    }

    pub fn right_shoulder(a: f64, b: f64) -> Result<Self> {
        Self::RightShoulder { a, b }.validated()
    }

    /// Checks parameter ordering; deserialised values should pass through here.
    pub fn validated(self) -> Result<Self> {
        let params: Vec<f64> = match self {
            Self::Gaussian { center, sigma } => {
                if !(sigma > 0.0) {
                    return Err(TxaiError::Config(format!("gaussian sigma must be > 0, got {sigma}")));
                }
                vec![center, sigma]
            }
            Self::Trapezoid { a, b, c, d } => vec![a, b, c, d],
            Self::Triangular { a, b, c } => vec![a, b, c],
            Self::LeftShoulder { a, b } | Self::RightShoulder { a, b } => vec![a, b],
        };
        if params.iter().any(|p| !p.is_finite()) {
            return Err(TxaiError::Config(format!("non-finite membership parameter in {self:?}")));
        }
        if !matches!(self, Self::Gaussian { .. }) && params.windows(2).any(|w| w[0] > w[1]) {
            return Err(TxaiError::Config(format!("breakpoints must be non-decreasing in {self:?}")));
        }
        Ok(self)
    }

    /// Membership of `x`, rejecting non-finite input.
    pub fn eval(&self, x: f64) -> Result<f64> {
        check_finite(x, "membership input")?;
        Ok(self.grade(x))
    }

    /// Unchecked evaluation; NaN maps to 0.
    pub fn grade(&self, x: f64) -> f64 {
        let v = match *self {
            Self::Gaussian { center, sigma } => {
                let d = (x - center) / sigma;
                (-0.5 * d * d).exp()
            }
            Self::Trapezoid { a, b, c, d } => trapezoid(x, a, b, c, d),
            Self::Triangular { a, b, c } => trapezoid(x, a, b, b, c),
            Self::LeftShoulder { a, b } => {
                if x <= a {
                    1.0
                } else if x >= b {
                    0.0
                } else {
                    (b - x) / (b - a)
                }
            }
            Self::RightShoulder { a, b } => {
                if x <= a {
                    0.0
                } else if x >= b {
                    1.0
                } else {
                    (x - a) / (b - a)
                }
            }
        };
        if v.is_nan() {
            0.0
        } else {
            v.clamp(0.0, 1.0)
        }
    }

    /// A point where the function attains 1.
    pub fn peak(&self) -> f64 {
        match *self {
            Self::Gaussian { center, .. } => center,
            Self::Trapezoid { b, .. } => b,
            Self::Triangular { b, .. } => b,
            Self::LeftShoulder { a, .. } => a,
            Self::RightShoulder { b, .. } => b,
        }
    }
}

fn trapezoid(x: f64, a: f64, b: f64, c: f64, d: f64) -> f64 {
    if x < a || x > d {
        0.0
    } else if x >= b && x <= c {
        1.0
    } else if x < b {
        (x - a) / (b - a)
    } else {
        (d - x) / (d - c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConceptualLabel {
    pub name: String,
    pub mf: MembershipFunction,
}

impl ConceptualLabel {
    pub fn new(name: impl Into<String>, mf: MembershipFunction) -> Self {
        Self { name: name.into(), mf }
    }
}

/// A named input feature, its universe of discourse and its ordered labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VariableSpec", into = "VariableSpec")]
pub struct LinguisticVariable {
    name: String,
    universe: (f64, f64),
    labels: Vec<ConceptualLabel>,
}

#[derive(Serialize, Deserialize)]
struct VariableSpec {
    name: String,
    universe: (f64, f64),
    labels: Vec<ConceptualLabel>,
}

impl TryFrom<VariableSpec> for LinguisticVariable {
    type Error = TxaiError;

    fn try_from(spec: VariableSpec) -> Result<Self> {
        LinguisticVariable::new(spec.name, spec.universe, spec.labels)
    }
}

impl From<LinguisticVariable> for VariableSpec {
    fn from(v: LinguisticVariable) -> Self {
        VariableSpec { name: v.name, universe: v.universe, labels: v.labels }
    }
}

impl LinguisticVariable {
    /// Builds a variable, checking the universe, label names and coverage on the
    /// default 1,000-point grid.
    pub fn new(
        name: impl Into<String>,
        universe: (f64, f64),
        labels: Vec<ConceptualLabel>,
    ) -> Result<Self> {
        Self::with_resolution(name, universe, labels, DEFAULT_COVERAGE_RESOLUTION)
    }

    pub fn with_resolution(
        name: impl Into<String>,
        universe: (f64, f64),
        labels: Vec<ConceptualLabel>,
        resolution: usize,
    ) -> Result<Self> {
        let name = name.into();
        let (lo, hi) = universe;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(TxaiError::Config(format!("variable {name}: degenerate universe [{lo}, {hi}]")));
        }
        if labels.is_empty() {
            return Err(TxaiError::Config(format!("variable {name}: needs at least one label")));
        }
        for (i, l) in labels.iter().enumerate() {
            l.mf.validated()?;
            if labels[..i].iter().any(|o| o.name == l.name) {
                return Err(TxaiError::Config(format!("variable {name}: duplicate label {}", l.name)));
            }
        }
        let var = Self { name, universe, labels };
        var.check_coverage(resolution.max(2))?;
        Ok(var)
    }

    fn check_coverage(&self, resolution: usize) -> Result<()> {
        let (lo, hi) = self.universe;
        for k in 0..resolution {
            let x = lo + (hi - lo) * k as f64 / (resolution - 1) as f64;
            if self.labels.iter().all(|l| l.mf.grade(x) <= 0.0) {
                return Err(TxaiError::Config(format!(
                    "variable {}: no label covers x = {x}",
                    self.name
                )));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn universe(&self) -> (f64, f64) {
        self.universe
    }

    pub fn labels(&self) -> &[ConceptualLabel] {
        &self.labels
    }

    pub fn label(&self, j: usize) -> &ConceptualLabel {
        &self.labels[j]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label_index(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l.name == name)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.universe.0 && x <= self.universe.1
    }

    pub fn check_domain(&self, x: f64) -> Result<()> {
        check_finite(x, "feature value")?;
        if self.contains(x) {
            Ok(())
        } else {
            Err(TxaiError::Domain { value: x, lo: self.universe.0, hi: self.universe.1 })
        }
    }

    /// Label with maximal primary membership at `x`; the lowest index wins ties.
    pub fn argmax_col(&self, x: f64) -> Result<(usize, f64)> {
        self.check_domain(x)?;
        Ok(self.argmax_unchecked(x))
    }

    pub(crate) fn argmax_unchecked(&self, x: f64) -> (usize, f64) {
        let mut best = (0, self.labels[0].mf.grade(x));
        for (j, l) in self.labels.iter().enumerate().skip(1) {
            let m = l.mf.grade(x);
            if m > best.1 {
                best = (j, m);
            }
        }
        best
    }
}

/// How [`fit_primary_mfs`] places label centres.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitPolicy {
    /// Gaussian centres at equally spaced quantiles (10th..90th percentile),
    /// falling back to `Uniform` when quantiles collapse onto each other.
    #[default]
    Quantile,
    /// Gaussian centres equally spaced over [min, max].
    Uniform,
}

/// Fits `count` Gaussian labels to a data column.
///
/// Sigma is half the distance to the farther adjacent centre. The outermost
/// labels are widened when needed so their tails still reach the data range,
/// which makes the coverage invariant hold by construction.
pub fn fit_primary_mfs(data: &[f64], count: usize, policy: FitPolicy) -> Result<Vec<MembershipFunction>> {
    if count == 0 {
        return Err(TxaiError::Config("label count must be at least 1".into()));
    }
    if let Some(bad) = data.iter().find(|v| !v.is_finite()) {
        return Err(TxaiError::Input(format!("non-finite data value {bad}")));
    }
    let sorted = sorted_copy(data);
    let distinct = count_distinct(&sorted);
    if distinct < 2 {
        return Err(TxaiError::DegenerateData("constant data column".into()));
    }
    if distinct < count {
        return Err(TxaiError::DegenerateData(format!(
            "{distinct} distinct values cannot support {count} labels"
        )));
    }
    let (lo, hi) = (sorted[0], sorted[sorted.len() - 1]);
    let range = hi - lo;

    let centers = match policy {
        FitPolicy::Quantile => {
            let c = quantile_centers(&sorted, count);
            if c.windows(2).any(|w| w[1] - w[0] <= 1e-9 * range) {
                log::warn!("quantile label centres collapse; falling back to uniform placement");
                uniform_centers(lo, hi, count)
            } else {
                c
            }
        }
        FitPolicy::Uniform => uniform_centers(lo, hi, count),
    };

    let mut out = Vec::with_capacity(count);
    for (j, &c) in centers.iter().enumerate() {
        let mut sigma = if count == 1 {
            range / 2.0
        } else {
            let left = if j > 0 { c - centers[j - 1] } else { 0.0 };
            let right = if j + 1 < count { centers[j + 1] - c } else { 0.0 };
            0.5 * left.max(right)
        };
        if j == 0 {
            sigma = sigma.max((c - lo) / 3.0);
        }
        if j + 1 == count {
            sigma = sigma.max((hi - c) / 3.0);
        }
        out.push(MembershipFunction::gaussian(c, sigma)?);
    }
    Ok(out)
}

/// Fits a whole variable: universe = data range, one fitted label per name.
pub fn fit_variable(
    name: &str,
    data: &[f64],
    label_names: &[impl AsRef<str>],
    policy: FitPolicy,
) -> Result<LinguisticVariable> {
    let mfs = fit_primary_mfs(data, label_names.len(), policy)?;
    let lo = data.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = data.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let labels = label_names
        .iter()
        .zip(mfs)
        .map(|(n, mf)| ConceptualLabel::new(n.as_ref(), mf))
        .collect();
    LinguisticVariable::new(name, (lo, hi), labels)
}

fn count_distinct(sorted: &[f64]) -> usize {
    if sorted.is_empty() {
        return 0;
    }
    1 + sorted.windows(2).filter(|w| w[1] > w[0]).count()
}

fn quantile_centers(sorted: &[f64], count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![quantile_sorted(sorted, 0.5)];
    }
    (0..count)
        .map(|j| quantile_sorted(sorted, 0.1 + 0.8 * j as f64 / (count - 1) as f64))
        .collect()
}

fn uniform_centers(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![0.5 * (lo + hi)];
    }
    (0..count).map(|j| lo + (hi - lo) * j as f64 / (count - 1) as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn thermal() -> LinguisticVariable {
        LinguisticVariable::new(
            "thermal",
            (-10.0, 40.0),
            vec![
                ConceptualLabel::new("Cold", MembershipFunction::left_shoulder(5.0, 20.0).unwrap()),
                ConceptualLabel::new("Comfortable", MembershipFunction::triangular(10.0, 22.0, 30.0).unwrap()),
                ConceptualLabel::new("Hot", MembershipFunction::right_shoulder(20.0, 35.0).unwrap()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn gaussian_peak_is_one() {
        let mf = MembershipFunction::gaussian(0.0, 4.0).unwrap();
        assert_eq!(mf.eval(0.0).unwrap(), 1.0);
    }

    #[test]
    fn trapezoid_outside_support_is_zero() {
        let mf = MembershipFunction::trapezoid(0.0, 0.0, 8.0, 20.0).unwrap();
        assert_eq!(mf.eval(25.0).unwrap(), 0.0);
        assert_eq!(mf.eval(0.0).unwrap(), 1.0);
        assert!((mf.eval(14.0).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn gaussian_closed_form_value() {
        // exp(-(15-8)^2 / (2*4^2)) computed independently in double precision.
        let mf = MembershipFunction::gaussian(8.0, 4.0).unwrap();
        assert!((mf.eval(15.0).unwrap() - 0.2162651668298873).abs() < 1e-12);
    }

    #[test]
    fn non_finite_input_is_rejected() {
        let mf = MembershipFunction::gaussian(0.0, 1.0).unwrap();
        assert!(matches!(mf.eval(f64::NAN), Err(TxaiError::Input(_))));
        assert!(matches!(mf.eval(f64::INFINITY), Err(TxaiError::Input(_))));
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(MembershipFunction::gaussian(0.0, 0.0).is_err());
        assert!(MembershipFunction::trapezoid(0.0, 3.0, 2.0, 4.0).is_err());
        assert!(MembershipFunction::triangular(1.0, 0.0, 2.0).is_err());
    }

    #[test]
    fn argmax_picks_cold_at_fifteen() {
        let var = LinguisticVariable::new(
            "thermal",
            (0.0, 40.0),
            vec![
                ConceptualLabel::new("Cold", MembershipFunction::left_shoulder(12.0, 17.0).unwrap()),
                ConceptualLabel::new("Comfortable", MembershipFunction::triangular(12.0, 22.0, 32.0).unwrap()),
                ConceptualLabel::new("Hot", MembershipFunction::right_shoulder(25.0, 35.0).unwrap()),
            ],
        )
        .unwrap();
        assert!((var.label(0).mf.grade(15.0) - 0.4).abs() < 1e-12);
        assert!((var.label(1).mf.grade(15.0) - 0.3).abs() < 1e-12);
        assert_eq!(var.label(2).mf.grade(15.0), 0.0);
        let (j, m) = var.argmax_col(15.0).unwrap();
        assert_eq!(j, 0);
        assert!((m - 0.4).abs() < 1e-12);
    }

    #[test]
    fn argmax_ties_go_to_first_label() {
        let mf = MembershipFunction::gaussian(0.0, 1.0).unwrap();
        let var = LinguisticVariable::new(
            "v",
            (-1.0, 1.0),
            vec![ConceptualLabel::new("A", mf), ConceptualLabel::new("B", mf), ConceptualLabel::new("C", mf)],
        )
        .unwrap();
        assert_eq!(var.argmax_col(0.3).unwrap().0, 0);
    }

    #[test]
    fn argmax_outside_universe_is_domain_error() {
        assert!(matches!(thermal().argmax_col(50.0), Err(TxaiError::Domain { .. })));
    }

    #[test]
    fn argmax_matches_brute_force_scan() {
        use rand::{Rng, SeedableRng};
        let var = thermal();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let x = rng.gen_range(-10.0..=40.0);
            let grades: Vec<f64> = var.labels().iter().map(|l| l.mf.grade(x)).collect();
            let mut best = 0;
            for j in 0..grades.len() {
                if grades[j] > grades[best] {
                    best = j;
                }
            }
            assert_eq!(var.argmax_col(x).unwrap().0, best);
        }
    }

    #[test]
    fn duplicate_label_names_rejected() {
        let mf = MembershipFunction::gaussian(0.0, 1.0).unwrap();
        let r = LinguisticVariable::new("v", (-1.0, 1.0), vec![ConceptualLabel::new("A", mf), ConceptualLabel::new("A", mf)]);
        assert!(matches!(r, Err(TxaiError::Config(_))));
    }

    #[test]
    fn coverage_gap_rejected() {
        let r = LinguisticVariable::new(
            "v",
            (0.0, 10.0),
            vec![
                ConceptualLabel::new("A", MembershipFunction::triangular(0.0, 1.0, 2.0).unwrap()),
                ConceptualLabel::new("B", MembershipFunction::triangular(8.0, 9.0, 10.0).unwrap()),
            ],
        );
        assert!(matches!(r, Err(TxaiError::Config(_))));
    }

    #[test]
    fn degenerate_universe_rejected() {
        let mf = MembershipFunction::gaussian(0.0, 1.0).unwrap();
        assert!(LinguisticVariable::new("v", (1.0, 1.0), vec![ConceptualLabel::new("A", mf)]).is_err());
    }

    #[test]
    fn quantile_fit_on_uniform_data() {
        let data: Vec<f64> = (0..=100).map(f64::from).collect();
        let mfs = fit_primary_mfs(&data, 3, FitPolicy::Quantile).unwrap();
        let centers: Vec<f64> = mfs.iter().map(|m| m.peak()).collect();
        for (c, want) in centers.iter().zip([10.0, 50.0, 90.0]) {
            assert!((c - want).abs() < 1e-9, "{centers:?}");
        }
        match mfs[1] {
            MembershipFunction::Gaussian { sigma, .. } => assert!((sigma - 20.0).abs() < 1e-9),
            _ => unreachable!(),
        }
    }

    #[test]
    fn single_label_fit_sits_at_median() {
        let data = [1.0, 2.0, 3.0, 4.0, 100.0];
        let mfs = fit_primary_mfs(&data, 1, FitPolicy::Quantile).unwrap();
        assert_eq!(mfs[0].peak(), 3.0);
    }

    #[test]
    fn constant_column_is_degenerate() {
        assert!(matches!(fit_primary_mfs(&[2.0; 10], 3, FitPolicy::Quantile), Err(TxaiError::DegenerateData(_))));
    }

    #[test]
    fn collapsed_quantiles_fall_back_to_uniform() {
        // 80% zeros, like light readings at night.
        let mut data = vec![0.0; 80];
        data.extend((0..20).map(|i| 400.0 + i as f64));
        let mfs = fit_primary_mfs(&data, 3, FitPolicy::Quantile).unwrap();
        let centers: Vec<f64> = mfs.iter().map(|m| m.peak()).collect();
        assert!(centers.windows(2).all(|w| w[1] > w[0]), "{centers:?}");
        let var = fit_variable("Light", &data, &["Low", "Medium", "High"], FitPolicy::Quantile);
        assert!(var.is_ok());
    }

    proptest! {
        #[test]
        fn membership_stays_in_unit_interval(
            c in -100.0f64..100.0, s in 0.01f64..50.0, x in -1e6f64..1e6,
            a in -50.0f64..0.0, w1 in 0.0f64..10.0, w2 in 0.0f64..10.0, w3 in 0.0f64..10.0,
        ) {
            let mfs = [
                MembershipFunction::gaussian(c, s).unwrap(),
                MembershipFunction::trapezoid(a, a + w1, a + w1 + w2, a + w1 + w2 + w3).unwrap(),
                MembershipFunction::triangular(a, a + w1, a + w1 + w2).unwrap(),
                MembershipFunction::left_shoulder(a, a + w1).unwrap(),
                MembershipFunction::right_shoulder(a, a + w1).unwrap(),
            ];
            for mf in mfs {
                let v = mf.eval(x).unwrap();
                prop_assert!((0.0..=1.0).contains(&v));
            }
        }

        #[test]
        fn membership_is_unimodal_when_sampled(c in -10.0f64..10.0, s in 0.1f64..5.0, a in -5.0f64..0.0, w in 0.0f64..3.0) {
            let mfs = [
                MembershipFunction::gaussian(c, s).unwrap(),
                MembershipFunction::trapezoid(a, a + w, a + 2.0 * w, a + 3.0 * w + 0.1).unwrap(),
            ];
            for mf in mfs {
                let ys: Vec<f64> = (0..400).map(|k| mf.grade(-20.0 + 0.1 * k as f64)).collect();
                // No sampled value is strictly below both some earlier and some later value.
                let mut running_max = f64::NEG_INFINITY;
                let mut suffix_max = vec![f64::NEG_INFINITY; ys.len() + 1];
                for k in (0..ys.len()).rev() {
                    suffix_max[k] = suffix_max[k + 1].max(ys[k]);
                }
                for k in 0..ys.len() {
                    prop_assert!(!(ys[k] + 1e-12 < running_max && ys[k] + 1e-12 < suffix_max[k + 1]));
                    running_max = running_max.max(ys[k]);
                }
            }
        }

        #[test]
        fn argmax_invariant_under_rescaling(x in -10.0f64..40.0, k in 0.01f64..100.0) {
            let var = thermal();
            let grades: Vec<f64> = var.labels().iter().map(|l| l.mf.grade(x) * k).collect();
            let mut best = 0;
            for j in 1..grades.len() {
                if grades[j] > grades[best] { best = j; }
            }
            prop_assert_eq!(best, var.argmax_col(x).unwrap().0);
        }

        #[test]
        fn fitted_variables_cover_their_range(
            data in proptest::collection::vec(-1000.0f64..1000.0, 5..200),
            count in 1usize..5,
        ) {
            let names: Vec<String> = (0..count).map(|i| format!("L{i}")).collect();
            match fit_variable("v", &data, &names, FitPolicy::Quantile) {
                Ok(var) => prop_assert_eq!(var.len(), count),
                Err(TxaiError::DegenerateData(_)) => {}
                Err(e) => prop_assert!(false, "unexpected error {e}"),
            }
        }
    }
}
