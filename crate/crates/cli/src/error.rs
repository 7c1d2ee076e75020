use std::fmt;

/// Command failure, carrying its process exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Protocol(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::Protocol(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Protocol(m) => write!(f, "protocol error: {m}"),
        }
    }
}

impl From<daqlink::Error> for CliError {
    fn from(e: daqlink::Error) -> Self {
        use daqlink::Error as E;
        match e {
            E::Config(_) => CliError::Usage(e.to_string()),
            E::File { .. } | E::Io(_) | E::Csv(_) => CliError::Io(e.to_string()),
            E::Domain(_) | E::Input(_) | E::Parse { .. } => CliError::Protocol(e.to_string()),
        }
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

pub fn io_err(what: impl fmt::Display, e: std::io::Error) -> CliError {
    CliError::Io(format!("{what}: {e}"))
}
