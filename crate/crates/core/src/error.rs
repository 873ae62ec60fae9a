use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A point handed to an evaluator lies outside its domain.
    #[error("{what} = {value} lies outside {range}")]
    Domain {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    /// Two modal objects with different truncations were combined.
    #[error("truncation mismatch: expected K = {expected}, found K = {found}")]
    Shape { expected: usize, found: usize },

    /// Non-finite or otherwise unusable input data.
    #[error("invalid input: {0}")]
    Input(String),

    /// A parameter outside its admissible range.
    #[error("{name} must be in {range} (got {value})")]
    Parameter {
        name: &'static str,
        range: &'static str,
        value: String,
    },

    /// A truncated series cannot meet the requested accuracy.
    #[error(
        "l-series tail bound {tail:.3e} exceeds tolerance {tolerance:.3e}; \
         l_modes must be at least {required_l_modes}"
    )]
    Precision {
        tail: f64,
        tolerance: f64,
        required_l_modes: usize,
    },
}

impl Error {
    pub(crate) fn parameter(name: &'static str, range: &'static str, value: impl ToString) -> Self {
        Error::Parameter {
            name,
            range,
            value: value.to_string(),
        }
    }
}
