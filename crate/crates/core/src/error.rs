use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid value for `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("negative {what} not allowed: {value}")]
    NegativeQuantity { what: &'static str, value: f64 },

    #[error("market response is indeterminate: every supply and demand elasticity term is zero")]
    DegenerateElasticities,

    #[error("EU disposable income is not set; income responses need `income_eu`")]
    MissingIncome,

    #[error("baseline does not clear: demand {demand} Ml/d vs supply {supply} Ml/d")]
    MarketImbalance { demand: f64, supply: f64 },

    #[error("excess demand does not change sign on [{lo}, {hi}] (values {f_lo}, {f_hi})")]
    NoBracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("root finder stopped after {iterations} iterations (residual {residual} Ml/d)")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("regressor has zero variance")]
    DegenerateRegressor,

    #[error("series lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("series too short: need at least {needed} observations, got {got}")]
    SeriesTooShort { needed: usize, got: usize },

    #[error("{window} window has {got} observations, need at least {needed}")]
    InsufficientWindow {
        window: String,
        got: usize,
        needed: usize,
    },

    #[error("price data: {0}")]
    Data(String),
}

impl Error {
    pub fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad input rather than by the computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::NegativeQuantity { .. }
                | Error::MissingIncome
                | Error::LengthMismatch { .. }
                | Error::SeriesTooShort { .. }
                | Error::InsufficientWindow { .. }
                | Error::Data(_)
        )
    }
}
