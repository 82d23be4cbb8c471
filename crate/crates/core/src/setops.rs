//! Union/intersection of temporal sets and their defuzzification through
//! Karnik-Mendel type reduction, z-weighted averaging and the Nie-Tan midpoint.

use serde::{Deserialize, Serialize};

use crate::bounds::Bounds;
use crate::error::{check_finite, Result, TxaiError};
use crate::temporal::{Tt2fs, ZLevels};

pub const DEFAULT_GRID_POINTS: usize = 201;

/// Strictly increasing sample points over a feature universe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    xs: Vec<f64>,
}

impl Grid {
    pub fn new(xs: Vec<f64>) -> Result<Self> {
        if xs.is_empty() {
            return Err(TxaiError::Input("grid has no points".into()));
        }
        for &x in &xs {
            check_finite(x, "grid point")?;
        }
        if xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(TxaiError::Input("grid points must be strictly increasing".into()));
        }
        Ok(Self { xs })
    }

    /// `points` evenly spaced values from `lo` to `hi` inclusive; a single point sits at the midpoint.
    pub fn uniform(lo: f64, hi: f64, points: usize) -> Result<Self> {
        if points == 0 {
            return Err(TxaiError::Input("grid has no points".into()));
        }
        if !(lo < hi) {
            return Err(TxaiError::Input(format!("empty grid range [{lo}, {hi}]")));
        }
        if points == 1 {
            return Self::new(vec![0.5 * (lo + hi)]);
        }
        let step = (hi - lo) / (points - 1) as f64;
        let mut xs: Vec<f64> = (0..points).map(|b| lo + step * b as f64).collect();
        xs[points - 1] = hi;
        Self::new(xs)
    }

    pub fn over(universe: (f64, f64), points: usize) -> Result<Self> {
        Self::uniform(universe.0, universe.1, points)
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }
}

/// Interval type-2 set sampled on a grid: one z-slice of one time interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct It2Slice {
    pub xs: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub zlevel: f64,
    pub interval: usize,
}

impl It2Slice {
    pub fn new(xs: Vec<f64>, lower: Vec<f64>, upper: Vec<f64>, zlevel: f64, interval: usize) -> Result<Self> {
        if xs.is_empty() || xs.len() != lower.len() || xs.len() != upper.len() {
            return Err(TxaiError::Input("slice arrays must be non-empty and of equal length".into()));
        }
        if xs.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(TxaiError::Input("slice grid must be strictly increasing".into()));
        }
        for (&l, &u) in lower.iter().zip(&upper) {
            if !(0.0 <= l && l <= u && u <= 1.0) {
                return Err(TxaiError::Ordering { lower: l, upper: u });
            }
        }
        Ok(Self { xs, lower, upper, zlevel, interval })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }
}

/// Samples the envelope of interval `q` at level `i`.
pub fn slice(set: &Tt2fs, q: usize, i: usize, grid: &Grid) -> Result<It2Slice> {
    if q >= set.axis().n_intervals() || i >= set.zlevels().len() {
        return Err(TxaiError::Input(format!("slice ({q}, {i}) out of range")));
    }
    let mut lower = Vec::with_capacity(grid.len());
    let mut upper = Vec::with_capacity(grid.len());
    for &x in grid.xs() {
        let b = set.envelope(q, i, x)?;
        lower.push(b.lower);
        upper.push(b.upper);
    }
    It2Slice::new(grid.xs().to_vec(), lower, upper, set.zlevels().levels()[i], q)
}

/// Every slice of a set, indexed `[q][i]`.
pub fn slices(set: &Tt2fs, grid: &Grid) -> Result<Vec<Vec<It2Slice>>> {
    (0..set.axis().n_intervals())
        .map(|q| (0..set.zlevels().len()).map(|i| slice(set, q, i, grid)).collect())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetOp {
    /// Pointwise max of lower and of upper envelopes.
    Union,
    /// Pointwise min of lower and of upper envelopes.
    Intersection,
}

impl SetOp {
    #[inline]
    fn join(self, a: f64, b: f64) -> f64 {
        match self {
            SetOp::Union => a.max(b),
            SetOp::Intersection => a.min(b),
        }
    }
}

/// Combines two slices sampled on the same grid.
pub fn combine_slices(a: &It2Slice, b: &It2Slice, op: SetOp) -> Result<It2Slice> {
    if a.xs != b.xs || a.zlevel != b.zlevel || a.interval != b.interval {
        return Err(TxaiError::Config("slices differ in grid, z-level or interval".into()));
    }
    let lower = a.lower.iter().zip(&b.lower).map(|(&x, &y)| op.join(x, y)).collect();
    let upper = a.upper.iter().zip(&b.upper).map(|(&x, &y)| op.join(x, y)).collect();
    It2Slice::new(a.xs.clone(), lower, upper, a.zlevel, a.interval)
}

/// Union or intersection of two temporal sets, as slices indexed `[q][i]`.
pub fn combine(a: &Tt2fs, b: &Tt2fs, op: SetOp, grid: &Grid) -> Result<Vec<Vec<It2Slice>>> {
    if a.axis() != b.axis() {
        return Err(TxaiError::Config("sets are defined on different time axes".into()));
    }
    if a.zlevels() != b.zlevels() {
        return Err(TxaiError::Config("sets use different z-levels".into()));
    }
    if a.universe() != b.universe() {
        return Err(TxaiError::Config("sets live on different feature universes".into()));
    }
    let sa = slices(a, grid)?;
    let sb = slices(b, grid)?;
    sa.iter()
        .zip(&sb)
        .map(|(qa, qb)| qa.iter().zip(qb).map(|(x, y)| combine_slices(x, y, op)).collect())
        .collect()
}

/// Centroid of a sampled type-1 set.
pub fn t1_centroid(xs: &[f64], mu: &[f64]) -> Result<f64> {
    let den: f64 = mu.iter().sum();
    if den <= 0.0 {
        return Err(TxaiError::EmptySet);
    }
    Ok(xs.iter().zip(mu).map(|(x, m)| x * m).sum::<f64>() / den)
}

/// Left and right centroids of an IT2 slice by the iterative Karnik-Mendel procedure.
pub fn km_type_reduce(s: &It2Slice) -> Result<Bounds> {
    if s.upper.iter().all(|&u| u <= 0.0) {
        return Err(TxaiError::EmptySet);
    }
    let y_l = km_endpoint(s, true);
    let y_r = km_endpoint(s, false);
    Ok(Bounds::spanning(y_l, y_r))
}

/// One KM endpoint. For the left centroid the first `k` points take the upper
/// grade and the rest the lower; for the right centroid the roles swap.
///
/// Every centroid lies in the hull of the points with positive upper grade.
/// Clamping into it guards against rounding pushing `y` past a lone support
/// point, which would leave the heavy side empty and the denominator zero.
fn km_endpoint(s: &It2Slice, left: bool) -> f64 {
    let n = s.len();
    let first = s.upper.iter().position(|&u| u > 0.0).expect("checked non-empty");
    let last = s.upper.iter().rposition(|&u| u > 0.0).expect("checked non-empty");
    let hull = |y: f64| y.clamp(s.xs[first], s.xs[last]);
    let theta0: Vec<f64> = s.lower.iter().zip(&s.upper).map(|(l, u)| 0.5 * (l + u)).collect();
    let mut y = hull(weighted(&s.xs, &theta0));
    let mut k = switch_index(&s.xs, y, left);
    for _ in 0..=n {
        y = hull(switched(s, k, left));
        let k_next = switch_index(&s.xs, y, left);
        if k_next == k {
            break;
        }
        k = k_next;
    }
    y
}

fn switch_index(xs: &[f64], y: f64, left: bool) -> usize {
    if left {
        xs.partition_point(|&x| x <= y)
    } else {
        xs.partition_point(|&x| x < y)
    }
}

fn switched(s: &It2Slice, k: usize, left: bool) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for b in 0..s.len() {
        let heavy = (b < k) == left;
        let w = if heavy { s.upper[b] } else { s.lower[b] };
        num += s.xs[b] * w;
        den += w;
    }
    num / den
}

fn weighted(xs: &[f64], w: &[f64]) -> f64 {
    let den: f64 = w.iter().sum();
    xs.iter().zip(w).map(|(x, w)| x * w).sum::<f64>() / den
}

/// z-weighted average of per-level `[y_l, y_r]` pairs.
pub fn centroid_average(pairs: &[Bounds], zlevels: &ZLevels) -> Result<Bounds> {
    if pairs.len() != zlevels.len() {
        return Err(TxaiError::Input(format!(
            "{} centroid pairs for {} z-levels",
            pairs.len(),
            zlevels.len()
        )));
    }
    let w = zlevels.weight_sum();
    let (mut l, mut r) = (0.0, 0.0);
    for (p, &z) in pairs.iter().zip(zlevels.levels()) {
        l += z * p.lower;
        r += z * p.upper;
    }
    Ok(Bounds { lower: l / w, upper: r / w })
}

/// Crisp value of an interval: its midpoint.
pub fn nie_tan(y_l: f64, y_r: f64) -> Result<f64> {
    if y_l.is_nan() || y_r.is_nan() || y_l > y_r {
        return Err(TxaiError::Ordering { lower: y_l, upper: y_r });
    }
    Ok(0.5 * (y_l + y_r))
}

/// KM per level, z-weighted average, then midpoint. `slices` holds one slice per level.
pub fn defuzzify_slices(slices: &[It2Slice], zlevels: &ZLevels) -> Result<f64> {
    let pairs = slices.iter().map(km_type_reduce).collect::<Result<Vec<_>>>()?;
    let avg = centroid_average(&pairs, zlevels)?;
    nie_tan(avg.lower, avg.upper)
}

/// Crisp output of one time interval of a set.
pub fn defuzzify_interval(set: &Tt2fs, q: usize, grid: &Grid) -> Result<f64> {
    let per_level = (0..set.zlevels().len())
        .map(|i| slice(set, q, i, grid))
        .collect::<Result<Vec<_>>>()?;
    defuzzify_slices(&per_level, set.zlevels())
}

/// One crisp value per time interval.
pub fn defuzzify_all(set: &Tt2fs, grid: &Grid) -> Result<Vec<f64>> {
    (0..set.axis().n_intervals()).map(|q| defuzzify_interval(set, q, grid)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn it2(xs: &[f64], lower: &[f64], upper: &[f64]) -> It2Slice {
        It2Slice::new(xs.to_vec(), lower.to_vec(), upper.to_vec(), 1.0, 0).unwrap()
    }

    #[test]
    fn lone_support_point_survives_rounding() {
        // The weighted mean of this single point rounds one ulp below it.
        let s = it2(&[-22.386140292314003], &[0.0], &[0.9272620603479462]);
        let b = km_type_reduce(&s).unwrap();
        assert_eq!((b.lower, b.upper), (-22.386140292314003, -22.386140292314003));
        let s = it2(&[0.0, 1.0, 2.0], &[0.0, 0.0, 0.0], &[0.0, 0.3, 0.0]);
        assert_eq!(km_type_reduce(&s).unwrap(), Bounds::point(1.0));
    }

    #[test]
    fn grid_shapes() {
        let g = Grid::uniform(0.0, 1.0, 5).unwrap();
        assert_eq!(g.xs(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(Grid::uniform(0.0, 2.0, 1).unwrap().xs(), &[1.0]);
        assert!(Grid::uniform(0.0, 1.0, 0).is_err());
        assert!(Grid::new(vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn componentwise_join() {
        let a = it2(&[0.0], &[0.3], &[0.6]);
        let b = it2(&[0.0], &[0.5], &[0.55]);
        let u = combine_slices(&a, &b, SetOp::Union).unwrap();
        let i = combine_slices(&a, &b, SetOp::Intersection).unwrap();
        assert_eq!((u.lower[0], u.upper[0]), (0.5, 0.6));
        assert_eq!((i.lower[0], i.upper[0]), (0.3, 0.55));
    }

    #[test]
    fn km_collapses_to_t1_centroid() {
        let xs = [0.0, 1.0, 2.0, 3.0, 4.0];
        let mu = [0.1, 0.5, 1.0, 0.7, 0.2];
        let b = km_type_reduce(&it2(&xs, &mu, &mu)).unwrap();
        let c = t1_centroid(&xs, &mu).unwrap();
        assert!((b.lower - c).abs() < 1e-12 && (b.upper - c).abs() < 1e-12);
    }

    #[test]
    fn km_symmetric_slice_centres_on_midpoint() {
        let xs = [0.0, 1.0, 2.0, 3.0, 4.0];
        let lower = [0.0, 0.2, 0.6, 0.2, 0.0];
        let upper = [0.3, 0.7, 1.0, 0.7, 0.3];
        let b = km_type_reduce(&it2(&xs, &lower, &upper)).unwrap();
        assert!((b.midpoint() - 2.0).abs() < 1e-12);
        assert!(b.lower < b.upper);
    }

    #[test]
    fn km_single_supported_point() {
        let b = km_type_reduce(&it2(&[0.0, 1.0, 2.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 0.4])).unwrap();
        assert_eq!((b.lower, b.upper), (2.0, 2.0));
        let b = km_type_reduce(&it2(&[0.0, 1.0, 2.0], &[0.0, 0.0, 0.0], &[0.4, 0.0, 0.0])).unwrap();
        assert_eq!((b.lower, b.upper), (0.0, 0.0));
    }

    #[test]
    fn km_empty_set_is_error() {
        let r = km_type_reduce(&it2(&[0.0, 1.0], &[0.0, 0.0], &[0.0, 0.0]));
        assert!(matches!(r, Err(TxaiError::EmptySet)));
    }

    #[test]
    fn centroid_average_matches_hand_arithmetic() {
        let pairs: Vec<Bounds> = (1..=5).map(|v| Bounds::point(v as f64)).collect();
        let avg = centroid_average(&pairs, &ZLevels::paper_default()).unwrap();
        assert!((avg.lower - 11.0 / 3.0).abs() < 1e-12);
        let same = vec![Bounds { lower: 0.2, upper: 0.7 }; 5];
        let avg = centroid_average(&same, &ZLevels::paper_default()).unwrap();
        assert!((avg.lower - 0.2).abs() < 1e-12 && (avg.upper - 0.7).abs() < 1e-12);
    }

    #[test]
    fn nie_tan_midpoint() {
        assert!((nie_tan(0.056, 0.0696).unwrap() - 0.0628).abs() < 1e-12);
        assert_eq!(nie_tan(0.3, 0.3).unwrap(), 0.3);
        assert_eq!(nie_tan(0.0, 1.0).unwrap(), 0.5);
        assert!(matches!(nie_tan(0.7, 0.2), Err(TxaiError::Ordering { .. })));
    }

    #[test]
    fn invalid_slice_rejected() {
        assert!(It2Slice::new(vec![0.0], vec![0.5], vec![0.4], 1.0, 0).is_err());
        assert!(It2Slice::new(vec![0.0, 1.0], vec![0.5], vec![0.6], 1.0, 0).is_err());
    }
}
