use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("too few observations: need at least {needed}, got {got}")]
    TooFewObservations { needed: usize, got: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("degenerate series: {0}")]
    DegenerateSeries(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("lag out of range: {0}")]
    Lag(String),

    #[error("singular fit: {0}")]
    SingularFit(String),

    #[error("invalid model order: {0}")]
    Order(String),

    #[error("non-causal AR coefficients: {0}")]
    NonCausal(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("input error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Io { line: Option<usize>, message: String },
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
