use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("horizon exceeded: need {requested}, table holds {available}; increase n_max")]
    HorizonExceeded { requested: usize, available: usize },

    #[error("normalization failed: {0}")]
    Normalization(String),

    #[error("bound undefined: MGF argument {argument} lies outside [-{window}, {window}]")]
    BoundUndefined { argument: f64, window: f64 },

    #[error("bracket invalid: f({h_lo}) = {f_lo} (localized = {loc_lo}), f({h_hi}) = {f_hi} (localized = {loc_hi})")]
    BracketInvalid {
        h_lo: f64,
        f_lo: f64,
        loc_lo: bool,
        h_hi: f64,
        f_hi: f64,
        loc_hi: bool,
    },

    #[error("{what} = {value} is not an integer; choose parameters so that it is")]
    NonIntegerRatio { what: &'static str, value: f64 },

    #[error("inconsistent input: {0}")]
    Inconsistent(String),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
