use thiserror::Error;
use wiggler_core::PhysicsError;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{origin}:{line}: cannot parse `{text}`: expected `key = value` or `[section]`")]
    Syntax { origin: String, line: usize, text: String },
    #[error("{origin}:{line}: `{key}` is given twice")]
    Duplicate { origin: String, line: usize, key: String },
    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),
    #[error("`{key}`: {message} (got `{value}`)")]
    Invalid { key: String, value: String, message: String },
    #[error("cannot read configuration {path}: {source}")]
    Read { path: String, source: std::io::Error },
}

impl ConfigError {
    pub(crate) fn invalid(key: &str, value: &str, message: impl Into<String>) -> Self {
        ConfigError::Invalid { key: key.into(), value: value.into(), message: message.into() }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("numeric error: {0}")]
    Physics(#[from] PhysicsError),
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Physics(_) => 3,
            CliError::Write { .. } => 1,
        }
    }
}
