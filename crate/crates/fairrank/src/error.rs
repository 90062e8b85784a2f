//! Crate-wide error type with stable machine-readable codes.

use thiserror::Error;

/// Errors surfaced by pool validation, ranking procedures, and file I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate candidate id `{0}`")]
    DuplicateId(String),

    #[error("duplicate attribute `{0}` in attribute domain")]
    DuplicateAttribute(String),

    #[error("candidate `{candidate}` has attribute `{attribute}` outside the pool's attribute domain")]
    UnknownAttribute { candidate: String, attribute: String },

    #[error("candidate `{0}` has a non-finite score")]
    NonFiniteScore(String),

    #[error("empty {0} identifier")]
    EmptyIdentifier(&'static str),

    #[error("pool is empty")]
    EmptyPool,

    #[error("ratio has no entry for attribute `{0}`")]
    RatioDomainMismatch(String),

    #[error("proportion for `{attribute}` is {value}, outside [0, 1]")]
    RatioOutOfRange { attribute: String, value: f64 },

    #[error("proportions sum to {0}, expected 1 within 1e-9")]
    RatioSumMismatch(f64),

    #[error("attribute `{0}` has proportion 0 but a non-empty group")]
    ZeroProportionWithCandidates(String),

    #[error("platform candidate `{0}` does not appear in the reference ranking")]
    PlatformNotSubset(String),

    #[error("activeness for `{0}` is 0 but the platform has candidates of that group")]
    InfeasibleActivity(String),

    #[error("activeness for `{attribute}` is {value}, outside [0, 1]")]
    ActivityOutOfRange { attribute: String, value: f64 },

    #[error("activeness has no entry for attribute `{0}`")]
    ActivityDomainMismatch(String),

    #[error("candidate `{candidate}` is missing from the {which} ranking")]
    MissingFromRanking {
        candidate: String,
        which: &'static str,
    },

    #[error("invalid ranking: {0}")]
    InvalidRanking(String),

    #[error("invalid scenario config: {0}")]
    InvalidConfig(String),

    #[error("required flag missing: {0}")]
    MissingFlag(&'static str),

    #[error("`{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("`{path}`: {detail}")]
    Parse { path: String, detail: String },
}

impl Error {
    /// Stable code emitted on stderr as `ERROR <code>: <detail>`.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DuplicateId(_) => "DuplicateId",
            Error::DuplicateAttribute(_) => "DuplicateAttribute",
            Error::UnknownAttribute { .. } => "UnknownAttribute",
            Error::NonFiniteScore(_) => "NonFiniteScore",
            Error::EmptyIdentifier(_) => "EmptyIdentifier",
            Error::EmptyPool => "EmptyPool",
            Error::RatioDomainMismatch(_) => "RatioDomainMismatch",
            Error::RatioOutOfRange { .. } => "RatioOutOfRange",
            Error::RatioSumMismatch(_) => "RatioSumMismatch",
            Error::ZeroProportionWithCandidates(_) => "ZeroProportionWithCandidates",
            Error::PlatformNotSubset(_) => "PlatformNotSubset",
            Error::InfeasibleActivity(_) => "InfeasibleActivity",
            Error::ActivityOutOfRange { .. } => "ActivityOutOfRange",
            Error::ActivityDomainMismatch(_) => "ActivityDomainMismatch",
            Error::MissingFromRanking { .. } => "MissingFromRanking",
            Error::InvalidRanking(_) => "InvalidRanking",
            Error::InvalidConfig(_) => "ConfigError",
            Error::MissingFlag(_) => "MissingFlag",
            Error::Io { .. } => "IoError",
            Error::Parse { .. } => "ParseError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
