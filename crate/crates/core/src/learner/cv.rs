use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TxaiError};

/// Repeated nested cross-validation layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CvPlan {
    pub repeats: usize,
    pub test_fraction: f64,
    pub inner_folds: usize,
    pub stratified: bool,
    pub seed: u64,
}

impl Default for CvPlan {
    fn default() -> Self {
        Self { repeats: 10, test_fraction: 0.2, inner_folds: 10, stratified: true, seed: 42 }
    }
}

impl CvPlan {
    pub fn validate(&self) -> Result<()> {
        if self.repeats == 0 {
            return Err(TxaiError::Config("repeats must be at least 1".into()));
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(TxaiError::Config(format!("test fraction {} outside (0, 1)", self.test_fraction)));
        }
        if self.inner_folds < 2 {
            return Err(TxaiError::Config("inner folds must be at least 2".into()));
        }
        Ok(())
    }
}

/// Members of each class (or of one pseudo-class when unstratified), shuffled and
/// then stably ordered by time interval so that dealing spreads every interval.
fn strata<R: Rng>(
    indices: &[usize],
    classes: &[usize],
    intervals: &[usize],
    stratified: bool,
    rng: &mut R,
) -> BTreeMap<usize, Vec<usize>> {
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &i in indices {
        let key = if stratified { classes[i] } else { 0 };
        groups.entry(key).or_default().push(i);
    }
    for members in groups.values_mut() {
        members.shuffle(rng);
        members.sort_by_key(|&i| intervals[i]);
    }
    groups
}

/// Holds out `fraction` of every class by systematic sampling with a random start.
/// Returns `(train, test)` index lists, both ascending.
pub fn outer_split<R: Rng>(
    classes: &[usize],
    intervals: &[usize],
    fraction: f64,
    stratified: bool,
    rng: &mut R,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let all: Vec<usize> = (0..classes.len()).collect();
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (class, members) in strata(&all, classes, intervals, stratified, rng) {
        let n = members.len();
        let take = ((n as f64) * fraction).round() as usize;
        if take == 0 || take == n {
            return Err(TxaiError::Stratification(format!(
                "class {class} has {n} instances; cannot hold out a {fraction} share of it"
            )));
        }
        let start: f64 = rng.gen_range(0.0..1.0);
        let step = n as f64 / take as f64;
        let mut chosen = vec![false; n];
        for k in 0..take {
            chosen[((start + k as f64) * step).floor() as usize % n] = true;
        }
        for (pos, &i) in members.iter().enumerate() {
            if chosen[pos] {
                test.push(i);
            } else {
                train.push(i);
            }
        }
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

/// Deals `indices` into `k` folds whose sizes differ by at most one. Each fold
/// holds every class within one instance of its size times the class share:
/// quotas are the floors of those targets, topped up largest-need-first.
pub fn stratified_folds<R: Rng>(
    indices: &[usize],
    classes: &[usize],
    intervals: &[usize],
    k: usize,
    stratified: bool,
    rng: &mut R,
) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(TxaiError::Config("need at least two folds".into()));
    }
    let groups = strata(indices, classes, intervals, stratified, rng);
    if let Some((class, members)) = groups.iter().find(|(_, m)| m.len() < k) {
        return Err(TxaiError::Stratification(format!(
            "class {class} has {} instances, fewer than {k} folds",
            members.len()
        )));
    }
    let n = indices.len();
    let sizes: Vec<usize> = (0..k).map(|f| n / k + usize::from(f < n % k)).collect();
    let mut quota: Vec<Vec<usize>> =
        groups.values().map(|m| sizes.iter().map(|s| s * m.len() / n).collect()).collect();
    let mut room: Vec<usize> = (0..k).map(|f| sizes[f] - quota.iter().map(|q| q[f]).sum::<usize>()).collect();
    for (q, members) in quota.iter_mut().zip(groups.values()) {
        let need = members.len() - q.iter().sum::<usize>();
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&f| std::cmp::Reverse(room[f]));
        for &f in &order[..need] {
            q[f] += 1;
            room[f] -= 1;
        }
    }
    let mut folds = vec![Vec::new(); k];
    let mut next = 0;
    for (q, members) in quota.iter_mut().zip(groups.values()) {
        // Round-robin over folds with quota left keeps intervals spread.
        for &i in members {
            while q[next] == 0 {
                next = (next + 1) % k;
            }
            folds[next].push(i);
            q[next] -= 1;
            next = (next + 1) % k;
        }
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(folds)
}
