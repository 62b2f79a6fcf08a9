use std::path::PathBuf;

/// Errors from IO, wire protocols, and campaign orchestration.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] textfray_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path} line {line}: malformed JSON: {message}")]
    MalformedLine { path: PathBuf, line: usize, message: String },
    #[error("{path} line {line}: missing body key (\"article\" or \"text\")")]
    MissingBody { path: PathBuf, line: usize },
    #[error("{path} line {line}: {message}")]
    BadRecord { path: PathBuf, line: usize, message: String },
    #[error("{path}: {message}")]
    BadFile { path: PathBuf, message: String },
    #[error("transport failure after {attempts} attempts: {message}")]
    Transport { attempts: u32, message: String },
    #[error("service returned status {status}: {body}")]
    Protocol { status: u16, body: String },
    #[error("unexpected response shape: {0}")]
    ResponseShape(String),
    #[error("generation produced no usable unit")]
    EmptyGeneration,
    #[error("seed text is empty")]
    EmptySeed,
    #[error("article has only {units} units; at least 2 are required")]
    TooFewUnits { units: usize },
    #[error("cassette miss in replay mode for request {hash}")]
    CassetteMiss { hash: String },
    #[error("config error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
