use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("series diverges: {0}")]
    Divergence(String),
    #[error("index is not admissible: {0}")]
    Admissibility(String),
    #[error("argument outside supported domain: {0}")]
    Domain(String),
    #[error("unsupported evaluation: {0}")]
    Unsupported(String),
    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),
    #[error("precision loss: {0}")]
    PrecisionLoss(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("malformed expression: {0}")]
    Structure(String),
    #[error("while evaluating {path}: {source}")]
    Eval {
        path: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at(self, path: impl Into<String>) -> Error {
        match self {
            Error::Eval { path: inner, source } => Error::Eval {
                path: format!("{}/{}", path.into(), inner),
                source,
            },
            other => Error::Eval {
                path: path.into(),
                source: Box::new(other),
            },
        }
    }

    /// The innermost error with any path context stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::Eval { source, .. } => source.root(),
            other => other,
        }
    }
}
