use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("input is not valid {encoding} (first bad byte at offset {offset})")]
    Encoding { encoding: &'static str, offset: usize },

    #[error("text is empty")]
    EmptyText,

    #[error("section error: {0}")]
    Section(String),

    #[error("invalid length: {0}")]
    InvalidLength(String),

    #[error("layout error: {0}")]
    Layout(String),

    #[error("skip {skip} is not coprime to length {length} (gcd = {gcd})")]
    NonCoprimeKey { skip: usize, length: usize, gcd: usize },

    #[error("invalid key: {0}")]
    InvalidKey(String),

    #[error("intractable: {0}")]
    Tractability(String),

    #[error("comparison error: {0}")]
    Comparison(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("score error: {0}")]
    Score(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("promotion error: {0}")]
    Promotion(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("stale checkpoint {path}: spec digest {found} does not match {expected}")]
    StaleCheckpoint {
        path: PathBuf,
        expected: String,
        found: String,
    },

    #[error("I/O error on {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
