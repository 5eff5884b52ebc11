use chrono::NaiveDate;
use thiserror::Error;

/// Errors raised by the attribution engine.
#[derive(Debug, Error)]
pub enum AttribError {
    /// A caller-supplied argument is inconsistent with the data it refers to.
    #[error("invalid input: {0}")]
    Input(String),

    #[error("unknown date {0}")]
    UnknownDate(NaiveDate),

    #[error("unknown factor '{0}'")]
    UnknownFactor(String),

    #[error("partition boundaries not present in panel: {}", fmt_dates(.0))]
    MissingBoundaries(Vec<NaiveDate>),

    /// Malformed or inconsistent source data (panel files, report files).
    #[error("data error at row {row}, column {column}: {message}")]
    Data {
        row: usize,
        column: String,
        message: String,
    },

    #[error("invalid panel: {0}")]
    Panel(String),

    /// A pricing model was evaluated outside its domain.
    #[error("domain error for {factor} = {value}: {message}")]
    Domain {
        factor: String,
        value: f64,
        message: String,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Coarse error classes, used for process exit codes and FFI status codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Data,
    Domain,
    Other,
}

impl AttribError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            AttribError::Config(_) => ErrorKind::Config,
            AttribError::Input(_)
            | AttribError::UnknownDate(_)
            | AttribError::UnknownFactor(_)
            | AttribError::MissingBoundaries(_)
            | AttribError::Data { .. }
            | AttribError::Panel(_) => ErrorKind::Data,
            AttribError::Domain { .. } => ErrorKind::Domain,
            AttribError::Precondition(_) | AttribError::Io(_) => ErrorKind::Other,
        }
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        AttribError::Input(msg.into())
    }
}

fn fmt_dates(dates: &[NaiveDate]) -> String {
    dates.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", ")
}

pub type Result<T, E = AttribError> = std::result::Result<T, E>;
