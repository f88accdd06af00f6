use thiserror::Error;

use crate::rational::Rational;

/// Errors raised anywhere in the evaluation pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero denominator in rational {numerator}/0")]
    ZeroDenominator { numerator: String },

    #[error("cannot parse rational from {0:?}")]
    RationalSyntax(String),

    #[error("precision too low: {what} = {value} (minimum {min})")]
    Precision {
        what: &'static str,
        value: u32,
        min: u32,
    },

    #[error("domain error in {atom}: {reason}")]
    Domain { atom: String, reason: String },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("digamma pole at {0}")]
    Pole(Rational),

    #[error("invalid 3F2 parameter c = {0}: m + c vanishes for some term index")]
    InvalidParameter(Rational),

    #[error("c = 1 is singular for the closed form; use the basel case (pi^2/6)")]
    SingularCase,

    #[error("target accuracy 1e-{target} not reachable within {cap} terms (best bound {best})")]
    Accuracy { target: u32, cap: usize, best: String },

    #[error("syntax error at position {pos}: expected {expected}")]
    Syntax { pos: usize, expected: String },

    #[error("lower parameter {param} hits zero at term index {index}")]
    LowerParameter { param: Rational, index: usize },

    #[error("unknown theorem id {0:?}")]
    UnknownId(String),

    #[error("theorem {id}: {source}")]
    Record {
        id: String,
        #[source]
        source: Box<Error>,
    },

    #[error("theorem database: {0}")]
    Database(String),
}

pub type Result<T> = std::result::Result<T, Error>;
