use serde::{Deserialize, Serialize};

use crate::error::{Result, TxaiError};

/// A closed interval `[lower, upper]` of reals, used for lower/upper membership
/// grades, firing strengths, rule weights and left/right centroids alike.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Bounds {
    pub lower: f64,
    pub upper: f64,
}

impl Bounds {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if lower.is_nan() || upper.is_nan() || lower > upper {
            return Err(TxaiError::Ordering { lower, upper });
        }
        Ok(Self { lower, upper })
    }

    /// Orders the two endpoints.
    pub fn spanning(a: f64, b: f64) -> Self {
        if a <= b {
            Self { lower: a, upper: b }
        } else {
            Self { lower: b, upper: a }
        }
    }

    pub const fn point(v: f64) -> Self {
        Self { lower: v, upper: v }
    }

    pub const ZERO: Bounds = Bounds::point(0.0);

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, other: &Bounds) -> bool {
        self.lower <= other.lower && other.upper <= self.upper
    }
}
