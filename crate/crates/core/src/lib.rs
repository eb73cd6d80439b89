//! Calculus computed from statistics.
//!
//! Integrals are defined as the interval width times the arithmetic mean of
//! sampled function values, antiderivatives as integrals with a moving upper
//! limit, and derivatives as the limit of graphic means (secant slopes).
//!
//! The crate is organized by role:
//!
//! - [`expr`]: the expression language used to define formula functions,
//!   plus the built-in table of derivative/antiderivative pairs.
//! - [`sampling`]: uniform, random and convenience sample plans.
//! - [`mean_integral`]: arithmetic means, integrals, antiderivative grids,
//!   FTC evaluation and convergence studies.
//! - [`derivative`]: graphic means, limit-of-secant derivatives and
//!   DA-pair verification.
//! - [`tabular`]: data-defined functions loaded from CSV.

pub mod derivative;
mod error;
pub mod expr;
mod function;
pub mod mean_integral;
pub mod sampling;
pub mod tabular;

pub use derivative::{
    derivative_at, graphic_mean, verify_da_pair, DaPairReport, DaTolerances,
    DerivativeEstimate, DerivativeOptions, SecantMode,
};
pub use error::{Error, Result};
pub use expr::{builtin_da_table, find_da_pair, parse, DaPair, EvalError, EvalErrorKind, Expr, ParseError};
pub use function::FunctionHandle;
pub use mean_integral::{
    antiderivative_grid, arithmetic_mean, convergence_study, ftc_evaluate, function_mean,
    integral, AntiderivativeGrid, ConvergenceReport, IntegralResult, MeanEstimate,
    StudyStrategy,
};
pub use sampling::{Interval, SamplePlan, Sampling, SHIPPED_SEEDS};
pub use tabular::TabularFunction;
