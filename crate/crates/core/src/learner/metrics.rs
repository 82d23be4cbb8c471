use serde::{Deserialize, Serialize};

/// Classification quality of one prediction set. Abstentions count as errors.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Metrics {
    pub balanced_accuracy: f64,
    pub recall: f64,
    pub precision: f64,
    pub f_score: f64,
    pub accuracy: f64,
    pub abstentions: usize,
    pub n: usize,
}

impl Metrics {
    pub const NAMES: [&'static str; 5] = ["balanced_accuracy", "recall", "precision", "f_score", "accuracy"];

    pub fn values(&self) -> [f64; 5] {
        [self.balanced_accuracy, self.recall, self.precision, self.f_score, self.accuracy]
    }

    /// With a positive class, recall/precision/f-score are that class's; otherwise
    /// they are macro averages. Balanced accuracy averages recall over classes
    /// present in `truth`.
    pub fn compute(truth: &[usize], predicted: &[Option<usize>], n_classes: usize, positive: Option<usize>) -> Self {
        assert_eq!(truth.len(), predicted.len(), "one prediction per instance");
        let mut tp = vec![0usize; n_classes];
        let mut support = vec![0usize; n_classes];
        let mut predicted_as = vec![0usize; n_classes];
        let mut abstentions = 0;
        for (&t, &p) in truth.iter().zip(predicted) {
            support[t] += 1;
            match p {
                Some(p) => {
                    predicted_as[p] += 1;
                    if p == t {
                        tp[t] += 1;
                    }
                }
                None => abstentions += 1,
            }
        }
        let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        let recall_of = |c: usize| ratio(tp[c], support[c]);
        let precision_of = |c: usize| ratio(tp[c], predicted_as[c]);
        let f_of = |c: usize| harmonic(precision_of(c), recall_of(c));

        let present: Vec<usize> = (0..n_classes).filter(|&c| support[c] > 0).collect();
        let balanced_accuracy = mean_over(&present, recall_of);
        let (recall, precision, f_score) = match positive {
            Some(c) => (recall_of(c), precision_of(c), f_of(c)),
            None => (mean_over(&present, recall_of), mean_over(&present, precision_of), mean_over(&present, f_of)),
        };
        let correct: usize = tp.iter().sum();
        Self {
            balanced_accuracy,
            recall,
            precision,
            f_score,
            accuracy: ratio(correct, truth.len()),
            abstentions,
            n: truth.len(),
        }
    }
}

fn harmonic(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

fn mean_over(classes: &[usize], f: impl Fn(usize) -> f64) -> f64 {
    if classes.is_empty() {
        return 0.0;
    }
    classes.iter().map(|&c| f(c)).sum::<f64>() / classes.len() as f64
}
