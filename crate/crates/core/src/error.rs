use thiserror::Error;

use crate::valuation::Valuation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid tower: {0}")]
    InvalidTower(String),

    #[error("elements live in different towers")]
    TowerMismatch,

    #[error("element is indistinguishable from zero at precision {0}")]
    ZeroAtPrecision(Valuation),

    /// The argument lies outside the strict convergence domain of a series.
    #[error("{series} diverges: valuation {valuation} is not > {threshold}")]
    Domain {
        series: &'static str,
        valuation: Valuation,
        threshold: Valuation,
    },

    /// `exp(p*y) - 1` falls outside the binomial p-th root domain.
    #[error("p-th root of exp(p*y) not available: inner valuation {valuation} is not > {threshold}")]
    RootDomain {
        valuation: Valuation,
        threshold: Valuation,
    },

    #[error("point coordinate {index} has negative valuation {valuation}")]
    OutOfBall { index: usize, valuation: Valuation },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("correspondence matrix is singular at working precision")]
    SingularConfig,

    #[error("smallness violated: {0}")]
    SmallnessViolation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// A stable name for the error class.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidTower(_) => "InvalidTower",
            Error::TowerMismatch => "TowerMismatch",
            Error::ZeroAtPrecision(_) => "ZeroAtPrecision",
            Error::Domain { .. } => "DomainError",
            Error::RootDomain { .. } => "RootDomainError",
            Error::OutOfBall { .. } => "OutOfBall",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::SingularConfig => "SingularConfig",
            Error::SmallnessViolation(_) => "SmallnessViolation",
            Error::Parse(_) => "ParseError",
        }
    }
}
