use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input record. `line` is 1-based.
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("node {author} is dangling (its column sums to zero)")]
    DanglingNode { author: String },

    /// Power iteration hit `max_iter` before the step difference fell below
    /// tolerance. The last iterate is kept so callers can decide to accept it.
    #[error(
        "power iteration did not converge for d={damping} after {iterations} iterations (L1 residual {residual:e})"
    )]
    NotConverged {
        damping: f64,
        iterations: usize,
        residual: f64,
        last: Vec<f64>,
    },

    #[error("linear system I - dT is numerically singular for d={damping}")]
    Singular { damping: f64 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("ranking {label} has zero variance")]
    DegenerateRanking { label: String },

    #[error("d={damping}: {source}")]
    AtDamping {
        damping: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("{left} vs {right}: {source}")]
    AtPair {
        left: String,
        right: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: u64, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// Strips `AtDamping` / `AtPair` context and returns the underlying error.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtDamping { source, .. } | Error::AtPair { source, .. } => source.root(),
            other => other,
        }
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        let line = err.position().map(|p| p.line()).unwrap_or(0);
        match err.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            kind => Error::Parse {
                line,
                message: csv_kind_message(&kind),
            },
        }
    }
}

fn csv_kind_message(kind: &csv::ErrorKind) -> String {
    match kind {
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => format!("expected {expected_len} fields, found {len}"),
        csv::ErrorKind::Utf8 { .. } => "invalid UTF-8".to_string(),
        _ => "malformed CSV record".to_string(),
    }
}
