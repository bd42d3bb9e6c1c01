use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown letter `{letter}` (group has generators {alphabet})")]
    UnknownLetter { letter: String, alphabet: String },

    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("size bound exceeded: {what} exceeds the limit of {limit}")]
    SizeBound { what: String, limit: usize },

    #[error("{op} is not supported for {family}")]
    Unsupported { op: String, family: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("inconclusive at truncation: {0}")]
    Inconclusive(String),

    #[error("instance file errors:\n{}", format_located(.0))]
    Spec(Vec<LocatedError>),

    #[error("i/o error: {0}")]
    Io(String),
}

/// An error tied to a (1-based) line of an instance file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocatedError {
    pub line: usize,
    pub message: String,
}

fn format_located(errors: &[LocatedError]) -> String {
    errors
        .iter()
        .map(|e| format!("  line {}: {}", e.line, e.message))
        .collect::<Vec<_>>()
        .join("\n")
}

impl Error {
    pub fn parse(input: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            input: input.into(),
            reason: reason.into(),
        }
    }

    pub fn size(what: impl Into<String>, limit: usize) -> Self {
        Error::SizeBound {
            what: what.into(),
            limit,
        }
    }

    pub fn unsupported(op: impl Into<String>, family: impl ToString) -> Self {
        Error::Unsupported {
            op: op.into(),
            family: family.to_string(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
