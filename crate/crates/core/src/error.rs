use thiserror::Error;

pub type Result<T> = std::result::Result<T, QError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QError {
    #[error("invalid q = {0}: expected 0 < q < 1 and 1 - q > 1e-12")]
    InvalidQ(f64),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("no convergence within {terms} terms")]
    NonConvergent { terms: usize },
    #[error("series diverges: term magnitudes grew through degree {degree}")]
    Divergent { degree: usize },
    #[error("non-finite argument or intermediate value")]
    NonFinite,
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl QError {
    /// Stable machine-readable name, used in CLI error records.
    pub fn kind(&self) -> &'static str {
        match self {
            QError::InvalidQ(_) => "InvalidQ",
            QError::Index(_) => "IndexError",
            QError::Domain(_) => "DomainError",
            QError::Pole(_) => "PoleError",
            QError::NonConvergent { .. } => "NonConvergent",
            QError::Divergent { .. } => "Divergent",
            QError::NonFinite => "NonFinite",
            QError::Config(_) => "ConfigError",
        }
    }
}
