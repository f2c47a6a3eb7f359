use std::fmt;

use cocite_core::Error;

/// Failure classes, each with its own exit status.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Config(String),
    Convergence(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Config(_) => 3,
            CliError::Convergence(_) => 4,
        }
    }

    pub fn input(msg: impl fmt::Display) -> Self {
        CliError::Input(msg.to_string())
    }

    pub fn config(msg: impl fmt::Display) -> Self {
        CliError::Config(msg.to_string())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Convergence(m) => write!(f, "convergence failure: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let msg = err.to_string();
        match err.root() {
            Error::InvalidParameter(_) => CliError::Config(msg),
            Error::NotConverged { .. } | Error::Singular { .. } => CliError::Convergence(msg),
            _ => CliError::Input(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Input(err.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(err: csv::Error) -> Self {
        CliError::Input(err.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_root_cause() {
        let conv = Error::AtDamping {
            damping: 0.5,
            source: Box::new(Error::NotConverged {
                damping: 0.5,
                iterations: 3,
                residual: 1.0,
                last: vec![],
            }),
        };
        assert_eq!(CliError::from(conv).exit_code(), 4);
        assert_eq!(
            CliError::from(Error::InvalidParameter("x".into())).exit_code(),
            3
        );
        assert_eq!(
            CliError::from(Error::Parse {
                line: 2,
                message: "x".into()
            })
            .exit_code(),
            2
        );
    }
}
