use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{format} parse error at line {line}: {message}")]
    Parse {
        format: &'static str,
        line: usize,
        message: String,
    },

    #[error("relation references unknown frame `{0}`")]
    DanglingRelation(String),

    #[error("unknown frame `{0}`")]
    UnknownFrame(String),

    #[error("token `{0}` is not in the vocabulary")]
    UnknownToken(String),

    #[error("similarity undefined for zero vector ({0})")]
    ZeroVector(String),

    #[error("vocabulary is empty")]
    EmptyVocabulary,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("no substitution candidate available")]
    NoCandidate,

    #[error("no observed mapping for target frame `{0}`")]
    NoMapping(String),

    #[error("every frame is already observed as a source for target `{0}`")]
    MappingsExhausted(String),

    #[error("no frame could be scored")]
    EmptyReport,

    #[error("cannot aggregate an empty set")]
    EmptyInput,

    #[error("degenerate sample: {0}")]
    Degenerate(String),

    #[error("invalid annotation matrix: {0}")]
    Annotation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(format: &'static str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        format,
        line,
        message: message.into(),
    }
}
