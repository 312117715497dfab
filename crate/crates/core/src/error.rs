use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("invalid timestamp {value:?} at line {line}")]
    Timestamp { line: u64, value: String },

    #[error("negative population {value} at line {line}")]
    NegativePopulation { line: u64, value: f64 },

    #[error("invalid coordinate: {0}")]
    InvalidCoordinate(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),

    #[error("all input points are collinear")]
    CollinearInput,

    #[error("beam {beam}: fewer than 3 non-collinear samples within 3 dB of the peak")]
    DegenerateFootprint { beam: usize },

    #[error("beam pattern is empty")]
    EmptyPattern,

    #[error("traffic matrix has {traffic} beams but the pattern has {pattern}")]
    MismatchedBeams { traffic: usize, pattern: usize },

    #[error("unknown user {0}")]
    UnknownUser(usize),

    #[error("bad thresholds: need upper > lower >= 0 (lower = {lower}, upper = {upper})")]
    BadThresholds { lower: f64, upper: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Process exit code: 2 for broken internal invariants, 1 for everything
    /// caused by inputs.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invariant(_) => 2,
            _ => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn from_csv(err: csv::Error) -> Self {
        let line = err.position().map(|p| p.line()).unwrap_or(0);
        match err.into_kind() {
            csv::ErrorKind::Io(e) => Error::Parse {
                line,
                message: e.to_string(),
            },
            kind => Error::Parse {
                line,
                message: format!("{kind:?}"),
            },
        }
    }
}
