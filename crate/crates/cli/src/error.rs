use std::fmt;

/// Failure classes with fixed exit codes and message prefixes.
#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Config(String),
    Coverage(String),
    Other(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Other(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Config(_) => 3,
            CliError::Coverage(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // one line each, so the prefix stays greppable
        let flat = |s: &str| s.replace('\n', " ");
        match self {
            CliError::Parse(m) => write!(f, "E_PARSE: {}", flat(m)),
            CliError::Config(m) => write!(f, "E_CONFIG: {}", flat(m)),
            CliError::Coverage(m) => write!(f, "E_COVERAGE: {}", flat(m)),
            CliError::Other(e) => write!(f, "error: {}", flat(&format!("{e:#}"))),
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Other(e)
    }
}
