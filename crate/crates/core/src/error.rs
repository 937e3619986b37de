use thiserror::Error;

#[derive(Debug, Error)]
pub enum HblError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("subspace list has more than {cap} entries; lower the closure depth or supply the list explicitly")]
    ClosureCap { cap: usize },
    #[error("the HBL polytope is empty")]
    EmptyPolytope,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("certificate check failed: {0}")]
    Certificate(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl HblError {
    /// Prefixes a parse location, keeping a single "parse error" tag.
    pub fn within(self, location: &str) -> Self {
        match self {
            HblError::Parse(msg) => HblError::Parse(format!("{location}: {msg}")),
            other => HblError::Parse(format!("{location}: {other}")),
        }
    }
}

pub type Result<T> = std::result::Result<T, HblError>;
