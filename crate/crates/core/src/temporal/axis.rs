use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TxaiError};

/// A named group of discrete time points, e.g. `Morning = hours 0..11`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeInterval {
    pub name: String,
    pub points: Vec<usize>,
}

impl TimeInterval {
    pub fn new(name: impl Into<String>, points: impl IntoIterator<Item = usize>) -> Self {
        Self { name: name.into(), points: points.into_iter().collect() }
    }
}

/// N discrete time points partitioned into Q named intervals.
///
/// Continuous time runs over `[0, N]` with point `n` at `t = n`; the axis is
/// cyclic, so `t = N` coincides with `t = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "AxisSpec", into = "AxisSpec")]
pub struct TimeAxis {
    points: Vec<String>,
    intervals: Vec<TimeInterval>,
    interval_of: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct AxisSpec {
    points: Vec<String>,
    intervals: Vec<TimeInterval>,
}

impl TryFrom<AxisSpec> for TimeAxis {
    type Error = TxaiError;
    fn try_from(s: AxisSpec) -> Result<Self> {
        TimeAxis::new(s.points, s.intervals)
    }
}

impl From<TimeAxis> for AxisSpec {
    fn from(a: TimeAxis) -> Self {
        AxisSpec { points: a.points, intervals: a.intervals }
    }
}

impl TimeAxis {
    pub fn new(points: Vec<String>, intervals: Vec<TimeInterval>) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(TxaiError::Config("time axis needs at least one point".into()));
        }
        if intervals.is_empty() || intervals.len() > n {
            return Err(TxaiError::Config(format!(
                "need 1 <= Q <= N intervals, got Q = {} for N = {n}",
                intervals.len()
            )));
        }
        let mut interval_of = vec![usize::MAX; n];
        for (q, iv) in intervals.iter().enumerate() {
            if iv.points.is_empty() {
                return Err(TxaiError::Config(format!("interval {} has no time points", iv.name)));
            }
            if intervals[..q].iter().any(|o| o.name == iv.name) {
                return Err(TxaiError::Config(format!("duplicate interval name {}", iv.name)));
            }
            for &p in &iv.points {
                if p >= n {
                    return Err(TxaiError::Config(format!("interval {} references point {p} >= N", iv.name)));
                }
                if interval_of[p] != usize::MAX {
                    return Err(TxaiError::Config(format!("time point {p} belongs to two intervals")));
                }
                interval_of[p] = q;
            }
        }
        if let Some(p) = interval_of.iter().position(|&q| q == usize::MAX) {
            return Err(TxaiError::Config(format!("time point {p} is not covered by any interval")));
        }
        Ok(Self { points, intervals, interval_of })
    }

    /// 24 hourly points split at the given half-open hour ranges.
    pub fn hours_of_day(intervals: &[(&str, Range<usize>)]) -> Result<Self> {
        let points = (0..24).map(|h| format!("{h:02}:00")).collect();
        let intervals = intervals.iter().map(|(name, r)| TimeInterval::new(*name, r.clone())).collect();
        Self::new(points, intervals)
    }

    /// Morning [0, 11), Daytime [11, 19), Evening [19, 24).
    pub fn occupancy_day() -> Self {
        Self::hours_of_day(&[("Morning", 0..11), ("Daytime", 11..19), ("Evening", 19..24)])
            .expect("static axis is valid")
    }

    /// Same points, one interval holding all of them.
    pub fn collapsed(&self) -> Self {
        let all = TimeInterval::new("All", 0..self.points.len());
        Self::new(self.points.clone(), vec![all]).expect("collapsed axis is valid")
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn n_intervals(&self) -> usize {
        self.intervals.len()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn intervals(&self) -> &[TimeInterval] {
        &self.intervals
    }

    pub fn interval(&self, q: usize) -> &TimeInterval {
        &self.intervals[q]
    }

    pub fn interval_index(&self, name: &str) -> Option<usize> {
        self.intervals.iter().position(|iv| iv.name == name)
    }

    /// Interval containing discrete point `n`.
    pub fn interval_of(&self, n: usize) -> usize {
        self.interval_of[n]
    }

    /// Continuous span `[0, N]`.
    pub fn span(&self) -> (f64, f64) {
        (0.0, self.points.len() as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn occupancy_axis_boundaries() {
        let ax = TimeAxis::occupancy_day();
        assert_eq!(ax.len(), 24);
        assert_eq!(ax.n_intervals(), 3);
        assert_eq!(ax.interval_of(10), 0);
        assert_eq!(ax.interval_of(11), 1);
        assert_eq!(ax.interval_of(18), 1);
        assert_eq!(ax.interval_of(19), 2);
        assert_eq!(ax.interval_of(23), 2);
    }

    #[test]
    fn intervals_must_partition() {
        let pts: Vec<String> = (0..4).map(|i| i.to_string()).collect();
        let overlap = TimeAxis::new(pts.clone(), vec![TimeInterval::new("a", 0..3), TimeInterval::new("b", 2..4)]);
        assert!(matches!(overlap, Err(TxaiError::Config(_))));
        let gap = TimeAxis::new(pts.clone(), vec![TimeInterval::new("a", 0..2), TimeInterval::new("b", 3..4)]);
        assert!(gap.is_err());
        let empty = TimeAxis::new(pts.clone(), vec![TimeInterval::new("a", 0..4), TimeInterval::new("b", 0..0)]);
        assert!(empty.is_err());
        // A wrapping season (Dec + Jan + Feb) is a valid group.
        let ok = TimeAxis::new(pts, vec![TimeInterval::new("a", [3, 0]), TimeInterval::new("b", 1..3)]);
        assert!(ok.is_ok());
    }

    #[test]
    fn serde_round_trip_revalidates() {
        let ax = TimeAxis::occupancy_day();
        let json = serde_json::to_string(&ax).unwrap();
        let back: TimeAxis = serde_json::from_str(&json).unwrap();
        assert_eq!(ax, back);
        let broken = json.replace("\"Evening\",\"points\":[19", "\"Evening\",\"points\":[18");
        assert!(serde_json::from_str::<TimeAxis>(&broken).is_err());
    }
}
