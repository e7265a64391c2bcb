use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value is out of range or inconsistent with another.
    #[error("invalid configuration: {field}: {message}")]
    Config { field: String, message: String },

    #[error("encoding error: {0}")]
    Encoding(String),

    #[error("enumeration budget exceeded: {required} evaluations needed, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("empty front")]
    EmptyFront,

    #[error("degenerate front: membership values sum to zero")]
    DegenerateFront,

    #[error("point ({j1}, {j2}) lies outside the reference box ({ref_j1}, {ref_j2})")]
    OutsideReference {
        j1: f64,
        j2: f64,
        ref_j1: f64,
        ref_j2: f64,
    },

    #[error("engine invariant violated: {0}")]
    Engine(String),

    #[error("failed to parse configuration: {0}")]
    Parse(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Whether this error stems from user-supplied configuration rather than
    /// a failure while running.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config { .. } | Error::Parse(_))
    }
}
