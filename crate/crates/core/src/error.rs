use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent input data (dimensions, labels, files).
    #[error("input error: {0}")]
    Input(String),

    /// A configuration value violates its declared invariant.
    #[error("config error: {0}")]
    Config(String),

    /// Parameters became non-finite during training.
    #[error("numeric divergence in round {round}: {detail}")]
    NumericDivergence { round: u32, detail: String },

    /// A metric cannot be computed from the supplied inputs.
    #[error("metric {metric} unavailable: {reason}")]
    MetricUnavailable { metric: String, reason: String },

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("toml error: {0}")]
    Toml(#[from] toml::de::Error),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn unavailable(metric: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::MetricUnavailable {
            metric: metric.into(),
            reason: reason.into(),
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    /// Process exit code used by the CLI: 3 for divergence, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NumericDivergence { .. } => 3,
            _ => 2,
        }
    }
}
