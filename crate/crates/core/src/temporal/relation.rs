use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_unit, Result, TxaiError};

/// Relation combining a time-conditioned frequency with a primary membership grade.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FuzzyRelation {
    Godel,
    Lukasiewicz,
    GainesRescher,
    MamdaniMin,
    #[default]
    MamdaniProduct,
}

impl FuzzyRelation {
    pub const ALL: [FuzzyRelation; 5] = [
        FuzzyRelation::Godel,
        FuzzyRelation::Lukasiewicz,
        FuzzyRelation::GainesRescher,
        FuzzyRelation::MamdaniMin,
        FuzzyRelation::MamdaniProduct,
    ];

    pub fn apply(self, mu_time: f64, mu_feature: f64) -> Result<f64> {
        check_unit(mu_time, "time membership")?;
        check_unit(mu_feature, "feature membership")?;
        Ok(self.apply_unchecked(mu_time, mu_feature))
    }

    #[inline]
    pub fn apply_unchecked(self, mu_time: f64, mu_feature: f64) -> f64 {
        match self {
            FuzzyRelation::Godel => {
                if mu_time <= mu_feature {
                    1.0
                } else {
                    mu_feature
                }
            }
            FuzzyRelation::Lukasiewicz => (1.0 - mu_time + mu_feature).min(1.0),
            FuzzyRelation::GainesRescher => {
                if mu_time <= mu_feature {
                    1.0
                } else {
                    0.0
                }
            }
            FuzzyRelation::MamdaniMin => mu_time.min(mu_feature),
            FuzzyRelation::MamdaniProduct => mu_time * mu_feature,
        }
    }

    pub fn is_mamdani(self) -> bool {
        matches!(self, FuzzyRelation::MamdaniMin | FuzzyRelation::MamdaniProduct)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FuzzyRelation::Godel => "godel",
            FuzzyRelation::Lukasiewicz => "lukasiewicz",
            FuzzyRelation::GainesRescher => "gaines-rescher",
            FuzzyRelation::MamdaniMin => "mamdani-min",
            FuzzyRelation::MamdaniProduct => "mamdani-product",
        }
    }
}

impl fmt::Display for FuzzyRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FuzzyRelation {
    type Err = TxaiError;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        FuzzyRelation::ALL
            .into_iter()
            .find(|r| r.as_str() == key)
            .ok_or_else(|| TxaiError::Config(format!("unknown relation '{s}'")))
    }
}
