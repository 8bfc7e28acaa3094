use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A scalar argument fell outside the domain of the operation.
    #[error("{what} = {value} is outside {range}")]
    Domain {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("invalid g-function: {0}")]
    InvalidGFunction(String),

    #[error("invalid state or operator: {0}")]
    InvalidState(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    /// An axis pair needed by the arbiter never occurred in the run list.
    #[error("insufficient data: no runs with axis pair {0}")]
    InsufficientData(&'static str),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("inconsistent four-coin statistics (residuals {residuals:?})")]
    Inconsistent { residuals: [f64; 4] },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable tag, used by the CLI's error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "domain",
            Error::InvalidGame(_) => "invalid_game",
            Error::InvalidGFunction(_) => "invalid_g_function",
            Error::InvalidState(_) => "invalid_state",
            Error::NoSolution(_) => "no_solution",
            Error::InsufficientData(_) => "insufficient_data",
            Error::Precondition(_) => "precondition",
            Error::Inconsistent { .. } => "inconsistent",
            Error::Parse(_) => "parse",
        }
    }
}

pub(crate) fn check_unit_interval(what: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::Domain {
            what,
            value,
            range: "[0, 1]",
        })
    }
}
