use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or inconsistent input; exit status 2.
    #[error("{0}")]
    Input(String),

    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },

    /// A library call failed on validated input; exit status 3.
    #[error("analysis failed: {0}")]
    Analysis(gitstab::Error),

    /// A cross-check inside the report did not hold; exit status 3.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl From<gitstab::Error> for CliError {
    fn from(e: gitstab::Error) -> Self {
        match e {
            gitstab::Error::Overflow(what) => Self::Input(format!("input too large for 64-bit weights ({what})")),
            other => Self::Analysis(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Input(_) | Self::Io { .. } => 2,
            Self::Analysis(_) | Self::Invariant(_) => 3,
        }
    }
}
