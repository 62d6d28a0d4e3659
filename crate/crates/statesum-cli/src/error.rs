use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{section} `{key}`{at}: unresolved reference `{target}`")]
    Reference { section: &'static str, key: String, target: String, at: Location },
    #[error("{section} `{key}`{at}: {message}")]
    Spec { section: &'static str, key: String, message: String, at: Location },
    #[error("{section} `{key}`{at}: {source}")]
    Construct { section: &'static str, key: String, source: statesum::Error, at: Location },
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Compute(#[from] statesum::Error),
}

impl CliError {
    /// 0 ok, 1 verification failure, 2 input error, 3 resource cap.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Compute(statesum::Error::ResourceCap { .. }) => 3,
            CliError::Compute(statesum::Error::Axiom(_)) => 1,
            _ => 2,
        }
    }
}

/// Optional `line:column` of the offending key in the source text.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Location(pub Option<(usize, usize)>);

impl std::fmt::Display for Location {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.0 {
            Some((l, c)) => write!(f, " (line {l}, column {c})"),
            None => Ok(()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
