use std::fmt;
use std::sync::Arc;

use crate::expr::{self, EvalError, Expr, ParseError};
use crate::tabular::{self, TabularFunction};

type NativeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A real function of one variable, whatever its origin: a parsed formula,
/// a data table (interpolated piecewise-linearly), or a native closure.
#[derive(Clone)]
pub enum FunctionHandle {
    Expr(Expr),
    Tabular(Arc<TabularFunction>),
    Builtin { name: String, f: NativeFn },
}

impl FunctionHandle {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        expr::parse(text).map(FunctionHandle::Expr)
    }

    pub fn builtin(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        FunctionHandle::Builtin {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        match self {
            FunctionHandle::Expr(e) => e.evaluate(x),
            FunctionHandle::Tabular(t) => tabular::interpolate(t, x)
                .map_err(|_| EvalError::domain(x, format!("table `{}`", t.source()))),
            FunctionHandle::Builtin { name, f } => {
                if !x.is_finite() {
                    return Err(EvalError::domain(x, name.clone()));
                }
                let y = f(x);
                if y.is_nan() {
                    Err(EvalError::domain(x, name.clone()))
                } else if y.is_infinite() {
                    Err(EvalError::non_finite(x, name.clone()))
                } else {
                    Ok(y)
                }
            }
        }
    }
}

impl fmt::Display for FunctionHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionHandle::Expr(e) => write!(f, "{e}"),
            FunctionHandle::Tabular(t) => write!(f, "table `{}`", t.source()),
            FunctionHandle::Builtin { name, .. } => f.write_str(name),
        }
    }
}

impl fmt::Debug for FunctionHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionHandle::Expr(e) => f.debug_tuple("Expr").field(e).finish(),
            FunctionHandle::Tabular(t) => f.debug_tuple("Tabular").field(t).finish(),
            FunctionHandle::Builtin { name, .. } => f.debug_tuple("Builtin").field(name).finish(),
        }
    }
}

impl From<Expr> for FunctionHandle {
    fn from(e: Expr) -> Self {
        FunctionHandle::Expr(e)
    }
}

impl From<TabularFunction> for FunctionHandle {
    fn from(t: TabularFunction) -> Self {
        FunctionHandle::Tabular(Arc::new(t))
    }
}
