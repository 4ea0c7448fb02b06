use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported format version `{0}`")]
    FormatVersion(String),
    #[error(transparent)]
    Core(#[from] acl_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("unknown generator kind `{0}`")]
    UnknownKind(String),
    #[error("unknown analysis `{0}`")]
    UnknownAnalysis(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
}

pub type Result<T> = std::result::Result<T, HarnessError>;
