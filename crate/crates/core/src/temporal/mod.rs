//! Temporal fuzzification: time axes, conditional frequencies, fuzzy relations
//! and temporal type-2 fuzzy sets.

mod axis;
mod frequency;
mod relation;
mod tt2fs;

pub use axis::{TimeAxis, TimeInterval};
pub use frequency::{
    all_conditional_frequencies, conditional_relative_frequency, ConditionalDistribution, ConditionalFrequency,
    Interpolation,
};
pub use relation::FuzzyRelation;
pub use tt2fs::{TemporalSettings, Tt2fs, ZLevels, DEFAULT_SHRINK};
