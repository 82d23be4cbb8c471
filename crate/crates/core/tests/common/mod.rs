//! Random generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use txai::bounds::Bounds;
use txai::inference::{Antecedent, DegreeTable};
use txai::membership::{ConceptualLabel, LinguisticVariable, MembershipFunction};
use txai::setops::It2Slice;
use txai::temporal::{
    ConditionalFrequency, FuzzyRelation, Interpolation, TemporalSettings, TimeAxis, TimeInterval, Tt2fs, ZLevels,
};

/// Strictly increasing grid of `b` points with random gaps.
pub fn random_xs<R: Rng>(rng: &mut R, b: usize) -> Vec<f64> {
    let mut x = rng.gen_range(-50.0..50.0);
    (0..b)
        .map(|_| {
            x += rng.gen_range(0.05..5.0);
            x
        })
        .collect()
}

/// An IT2 slice with lower <= upper and at least one positive upper grade.
/// Some grades are exactly zero, as in real envelopes.
pub fn random_slice<R: Rng>(rng: &mut R, b: usize) -> It2Slice {
    let xs = random_xs(rng, b);
    let mut upper: Vec<f64> = (0..b).map(|_| if rng.gen_bool(0.15) { 0.0 } else { rng.gen_range(0.0..=1.0) }).collect();
    let k = rng.gen_range(0..b);
    if upper[k] == 0.0 {
        upper[k] = rng.gen_range(0.1..=1.0);
    }
    let lower = upper.iter().map(|&u| if rng.gen_bool(0.2) { 0.0 } else { u * rng.gen_range(0.0..=1.0) }).collect();
    It2Slice::new(xs, lower, upper, 1.0, 0).expect("generated slice is valid")
}

/// Extreme centroids over all 2^B lower/upper assignments. Assignments with
/// zero total weight carry no centroid and are skipped.
pub fn brute_force_km(s: &It2Slice) -> (f64, f64) {
    let b = s.xs.len();
    assert!(b <= 20, "exhaustive search is for small grids");
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for mask in 0u32..(1 << b) {
        let (mut num, mut den) = (0.0, 0.0);
        for k in 0..b {
            let w = if mask >> k & 1 == 1 { s.upper[k] } else { s.lower[k] };
            num += s.xs[k] * w;
            den += w;
        }
        if den > 0.0 {
            let y = num / den;
            lo = lo.min(y);
            hi = hi.max(y);
        }
    }
    (lo, hi)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

pub fn random_relation<R: Rng>(rng: &mut R) -> FuzzyRelation {
    *FuzzyRelation::ALL.choose(rng).expect("non-empty")
}

/// Strictly increasing levels in (0, 1] ending anywhere.
pub fn random_zlevels<R: Rng>(rng: &mut R, count: usize) -> ZLevels {
    let mut z: Vec<f64> = (0..count).map(|_| rng.gen_range(0.01..=1.0)).collect();
    z.sort_by(f64::total_cmp);
    z.dedup();
    ZLevels::new(z).expect("sorted distinct levels")
}

/// N points split into `q` contiguous intervals of random lengths.
pub fn random_axis<R: Rng>(rng: &mut R, n: usize, q: usize) -> TimeAxis {
    assert!(n >= q);
    let mut cuts: Vec<usize> = (1..n).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(q - 1).collect();
    cuts.sort_unstable();
    let mut bounds = vec![0];
    bounds.extend(cuts);
    bounds.push(n);
    let intervals =
        bounds.windows(2).enumerate().map(|(k, w)| TimeInterval::new(format!("I{k}"), w[0]..w[1])).collect();
    TimeAxis::new((0..n).map(|p| format!("t{p}")).collect(), intervals).expect("partition is valid")
}

pub fn random_mf<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> MembershipFunction {
    let span = hi - lo;
    let c = rng.gen_range(lo..hi);
    match rng.gen_range(0..3) {
        0 => MembershipFunction::gaussian(c, rng.gen_range(0.02..0.5) * span).unwrap(),
        1 => {
            let a = c - rng.gen_range(0.01..0.4) * span;
            let b = c + rng.gen_range(0.01..0.4) * span;
            MembershipFunction::triangular(a, c, b).unwrap()
        }
        _ => {
            let a = c - rng.gen_range(0.01..0.3) * span;
            let b = c + rng.gen_range(0.0..0.2) * span;
            let d = b + rng.gen_range(0.01..0.3) * span;
            MembershipFunction::trapezoid(a, c, b, d).unwrap()
        }
    }
}

/// Counts with at least one positive entry.
pub fn random_counts<R: Rng>(rng: &mut R, n: usize) -> Vec<u64> {
    let mut c: Vec<u64> = (0..n).map(|_| if rng.gen_bool(0.2) { 0 } else { rng.gen_range(0..30) }).collect();
    if c.iter().all(|&v| v == 0) {
        let k = rng.gen_range(0..n);
        c[k] = rng.gen_range(1..30);
    }
    c
}

pub struct RandomSet {
    pub set: Tt2fs,
    pub var: LinguisticVariable,
    pub axis: TimeAxis,
}

/// A temporal set for label A on `[0, 100]` over an axis of `n` points and `q` intervals.
pub fn random_tt2fs<R: Rng>(rng: &mut R, n: usize, q: usize, zlevels: &ZLevels) -> RandomSet {
    let axis = random_axis(rng, n, q);
    random_tt2fs_on(rng, axis, zlevels)
}

pub fn random_tt2fs_on<R: Rng>(rng: &mut R, axis: TimeAxis, zlevels: &ZLevels) -> RandomSet {
    // The broad second label keeps the universe covered whatever shape A takes.
    let labels = vec![
        ConceptualLabel::new("A", random_mf(rng, 0.0, 100.0)),
        ConceptualLabel::new("B", MembershipFunction::gaussian(50.0, 100.0).unwrap()),
    ];
    let var = LinguisticVariable::new("X", (0.0, 100.0), labels).expect("valid variable");
    let settings = TemporalSettings {
        zlevels: zlevels.clone(),
        relation: random_relation(rng),
        interpolation: if rng.gen_bool(0.5) { Interpolation::Linear } else { Interpolation::MonotoneCubic },
        ..TemporalSettings::default()
    };
    let freq = ConditionalFrequency::from_counts(&random_counts(rng, axis.len()));
    let set = Tt2fs::build(&var, 0, &axis, &freq, &settings).expect("valid set");
    RandomSet { set, var, axis }
}

/// Random interval-valued degrees with lower <= upper, `[variable][label][level]`.
pub fn random_degrees<R: Rng>(rng: &mut R, labels: &[usize], levels: usize) -> Vec<Vec<Vec<Bounds>>> {
    labels
        .iter()
        .map(|&l| {
            (0..l)
                .map(|_| {
                    (0..levels)
                        .map(|_| {
                            let u: f64 = rng.gen_range(0.0..=1.0);
                            Bounds { lower: u * rng.gen_range(0.0..=1.0), upper: u }
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

pub fn random_table<R: Rng>(rng: &mut R, labels: &[usize], levels: usize) -> DegreeTable {
    DegreeTable::new(random_degrees(rng, labels, levels)).expect("valid table")
}

/// 1 to 3 antecedents on distinct variables.
pub fn random_antecedents<R: Rng>(rng: &mut R, labels: &[usize]) -> Vec<Antecedent> {
    let mut vars: Vec<usize> = (0..labels.len()).collect();
    vars.shuffle(rng);
    let k = rng.gen_range(1..=labels.len().min(3));
    let mut a: Vec<Antecedent> = vars[..k].iter().map(|&v| Antecedent::new(v, rng.gen_range(0..labels[v]))).collect();
    a.sort();
    a
}
