use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A constraint specification that describes no feasible base, or a point
    /// that is outside the base polytope.
    #[error("infeasible constraint: {0}")]
    Infeasible(String),

    #[error("unsupported constraint: {0}")]
    Unsupported(String),

    #[error("objective error: {0}")]
    Objective(String),

    #[error("{origin}:{line}: {message}")]
    Parse {
        origin: String,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub(crate) fn parse_err(origin: &str, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        origin: origin.to_string(),
        line,
        message: msg.into(),
    }
}
