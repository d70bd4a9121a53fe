//! CLI failure classes and their exit codes.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(String),
    Range(String),
    Resource(String),
    Domain(String),
    Io(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Parse(_) => "parse",
            CliError::Range(_) => "range",
            CliError::Resource(_) => "resource",
            CliError::Domain(_) => "domain",
            CliError::Io(_) => "io",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Range(_) => 4,
            CliError::Resource(_) => 5,
            CliError::Domain(_) => 6,
            CliError::Io(_) => 7,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m)
            | CliError::Parse(m)
            | CliError::Range(m)
            | CliError::Resource(m)
            | CliError::Domain(m)
            | CliError::Io(m) => m,
        }
    }
}

/// One line: `error[kind]: message`.
impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one_line = self.message().replace('\n', " ");
        write!(f, "error[{}]: {}", self.kind(), one_line)
    }
}

impl From<smoothbias::Error> for CliError {
    fn from(e: smoothbias::Error) -> Self {
        use smoothbias::Error as E;
        let msg = e.to_string();
        match e {
            E::Parse { .. } => CliError::Parse(msg),
            E::Range(_) => CliError::Range(msg),
            E::Resource(_) => CliError::Resource(msg),
            E::Io { .. } => CliError::Io(msg),
            E::Domain(_) | E::Pole(_) | E::Singularity(_) => CliError::Domain(msg),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
