use thiserror::Error;

pub type Result<T, E = TxaiError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum TxaiError {
    /// A value handed to an operation violates its precondition (NaN, out of [0,1], missing field).
    #[error("invalid input: {0}")]
    Input(String),

    #[error("value {value} lies outside the domain [{lo}, {hi}]")]
    Domain { value: f64, lo: f64, hi: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    /// Type reduction of a slice whose upper membership is zero everywhere.
    #[error("empty fuzzy set has no centroid")]
    EmptySet,

    #[error("interval bounds out of order: lower {lower} > upper {upper}")]
    Ordering { lower: f64, upper: f64 },

    #[error("stratification error: {0}")]
    Stratification(String),

    #[error("ingest error: {0}")]
    Ingest(String),

    #[error("undefined transition {from} -> {to}: no rule observed in the target interval")]
    UndefinedTransition { from: String, to: String },

    #[error("golden replay mismatch: {0}")]
    Golden(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(String),
}

impl TxaiError {
    /// Stable machine-readable code for each failure class; also the CLI exit status.
    pub fn code(&self) -> (&'static str, i32) {
        match self {
            TxaiError::Input(_) => ("E_INPUT", 2),
            TxaiError::Config(_) => ("E_CONFIG", 3),
            TxaiError::Ingest(_) => ("E_INGEST", 4),
            TxaiError::Domain { .. } => ("E_DOMAIN", 5),
            TxaiError::DegenerateData(_) => ("E_DEGENERATE", 6),
            TxaiError::EmptySet => ("E_EMPTY_SET", 7),
            TxaiError::Ordering { .. } => ("E_ORDERING", 8),
            TxaiError::Stratification(_) => ("E_STRATIFY", 9),
            TxaiError::UndefinedTransition { .. } => ("E_TRANSITION", 10),
            TxaiError::Golden(_) => ("E_GOLDEN", 11),
            TxaiError::Io(_) => ("E_IO", 12),
            TxaiError::Serde(_) => ("E_SERDE", 13),
        }
    }
}

impl From<serde_json::Error> for TxaiError {
    fn from(e: serde_json::Error) -> Self {
        TxaiError::Serde(e.to_string())
    }
}

impl From<toml::de::Error> for TxaiError {
    fn from(e: toml::de::Error) -> Self {
        TxaiError::Config(e.to_string())
    }
}

impl From<csv::Error> for TxaiError {
    fn from(e: csv::Error) -> Self {
        TxaiError::Ingest(e.to_string())
    }
}

pub(crate) fn check_finite(x: f64, what: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(TxaiError::Input(format!("{what} must be finite, got {x}")))
    }
}

pub(crate) fn check_unit(x: f64, what: &str) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(TxaiError::Input(format!("{what} must lie in [0, 1], got {x}")))
    }
}
