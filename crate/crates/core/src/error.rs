use thiserror::Error;

use crate::expr::{EvalError, ParseError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Eval(#[from] EvalError),

    #[error("invalid interval [{a}, {b}]: endpoints must be finite with a < b")]
    InvalidInterval { a: f64, b: f64 },

    #[error("sample count must be at least 1")]
    ZeroSamples,

    #[error("no sample points supplied")]
    EmptySample,

    #[error("sample point {point} lies outside [{a}, {b}]")]
    PointOutsideInterval { point: f64, a: f64, b: f64 },

    #[error("non-finite value {value} at index {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("{value} is outside the range [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },

    #[error("graphic mean needs two distinct points, got t1 = t2 = {0}")]
    CoincidentPoints(f64),

    #[error("evaluation failed at grid node {index} (x = {x}): {source}")]
    AtNode {
        index: usize,
        x: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("evaluation failed at step h = {h}: {source}")]
    AtStep {
        h: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("line {line}: {message}")]
    Csv { line: u64, message: String },

    #[error("duplicate abscissa {x} at line {line}")]
    DuplicateAbscissa { x: f64, line: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True when the failure came from evaluating a function (a domain
    /// violation or a non-finite result), possibly wrapped with location.
    pub fn is_evaluation(&self) -> bool {
        match self {
            Error::Eval(_) => true,
            Error::AtNode { source, .. } | Error::AtStep { source, .. } => source.is_evaluation(),
            _ => false,
        }
    }

    pub(crate) fn at_node(self, index: usize, x: f64) -> Error {
        Error::AtNode {
            index,
            x,
            source: Box::new(self),
        }
    }
}
