//! Temporal type-2 fuzzy sets and a time-dependent explainable rule-based classifier.

// `!(a < b)` guards deliberately reject NaN along with out-of-order values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod config;
pub mod data;
pub mod error;
pub mod golden;
pub mod inference;
pub mod learner;
pub mod membership;
pub mod plots;
pub mod setops;
pub mod stats;
pub mod synthetic;
pub mod temporal;
pub mod trajectories;
pub mod workflow;

pub use bounds::Bounds;
pub use error::{Result, TxaiError};
pub use membership::{ConceptualLabel, FitPolicy, LinguisticVariable, MembershipFunction};
pub use temporal::{FuzzyRelation, TemporalSettings, TimeAxis, TimeInterval, Tt2fs, ZLevels};
