use embezzle_core::CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("resource cap exceeded: {0}")]
    Cap(String),
    #[error(transparent)]
    Core(CoreError),
    #[error("io error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed report {path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl From<CoreError> for RunError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::SizeCap { .. } => RunError::Cap(e.to_string()),
            e => RunError::Core(e),
        }
    }
}

impl RunError {
    /// 3 for configuration problems, 4 for caps; core errors count as
    /// configuration since they come from rejected parameters.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Cap(_) => 4,
            _ => 3,
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        RunError::Io { path: path.as_ref().display().to_string(), source }
    }
}

pub type RunResult<T> = Result<T, RunError>;
