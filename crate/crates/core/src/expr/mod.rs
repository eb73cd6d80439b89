//! Single-variable expression language.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = unary { ("*" | "/") unary } ;
//! unary   = "-" unary | power ;
//! power   = primary [ "^" unary ] ;
//! primary = number | "x" | "pi" | "e" | func "(" expr ")" | "(" expr ")" ;
//! func    = "sin" | "cos" | "tan" | "sec" | "exp" | "ln" | "sqrt" | "abs" ;
//! number  = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ]
//!         | "." digits [ exponent ] ;
//! ```
//!
//! `^` binds tighter than unary minus and is right-associative, so `-2^2`
//! is `-(2^2)` and `2^3^2` is `2^9`. Function application always needs
//! parentheses: `sin(x)^2` is accepted, `sin x` is not.

mod da_table;
mod parser;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use da_table::{builtin_da_table, find_da_pair, DaPair};
pub use parser::parse;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sec,
    Exp,
    Ln,
    Sqrt,
    Abs,
}

impl Func {
    pub const ALL: [Func; 8] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Sec,
        Func::Exp,
        Func::Ln,
        Func::Sqrt,
        Func::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sec => "sec",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NamedConst {
    Pi,
    E,
}

impl NamedConst {
    pub fn value(self) -> f64 {
        match self {
            NamedConst::Pi => std::f64::consts::PI,
            NamedConst::E => std::f64::consts::E,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NamedConst::Pi => "pi",
            NamedConst::E => "e",
        }
    }
}

/// Abstract syntax tree of a function of `x`.
///
/// Trees are immutable once built; `Display` prints the canonical fully
/// parenthesized form, which parses back to an identical tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Expr {
    Const(f64),
    Named(NamedConst),
    Var,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EvalErrorKind {
    /// The operation is undefined for its argument (`ln(0)`, `sqrt(-1)`, `1/0`).
    Domain,
    /// The result overflowed or hit a pole.
    NonFinite,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{} in `{node}` at x = {input}", match .kind {
    EvalErrorKind::Domain => "domain violation",
    EvalErrorKind::NonFinite => "non-finite result",
})]
pub struct EvalError {
    pub kind: EvalErrorKind,
    pub input: f64,
    pub node: String,
}

impl EvalError {
    pub fn domain(input: f64, node: impl Into<String>) -> Self {
        EvalError {
            kind: EvalErrorKind::Domain,
            input,
            node: node.into(),
        }
    }

    pub fn non_finite(input: f64, node: impl Into<String>) -> Self {
        EvalError {
            kind: EvalErrorKind::NonFinite,
            input,
            node: node.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {position}: expected {expected}, found {found}")]
pub struct ParseError {
    /// 1-based character position.
    pub position: usize,
    pub expected: String,
    pub found: String,
}

impl Expr {
    pub fn constant(value: f64) -> Expr {
        Expr::Const(value)
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn call(func: Func, arg: Expr) -> Expr {
        Expr::Call(func, Box::new(arg))
    }

    pub fn contains_var(&self) -> bool {
        match self {
            Expr::Var => true,
            Expr::Const(_) | Expr::Named(_) => false,
            Expr::Neg(inner) | Expr::Call(_, inner) => inner.contains_var(),
            Expr::Binary(_, lhs, rhs) => lhs.contains_var() || rhs.contains_var(),
        }
    }

    /// Evaluates the tree at `x`.
    ///
    /// Any non-finite intermediate value aborts evaluation, so a `NaN` never
    /// leaks into a sum.
    pub fn evaluate(&self, x: f64) -> Result<f64, EvalError> {
        if !x.is_finite() {
            return Err(EvalError::domain(x, "x"));
        }
        self.eval_at(x)
    }

    fn eval_at(&self, x: f64) -> Result<f64, EvalError> {
        let value = match self {
            Expr::Const(c) => *c,
            Expr::Named(c) => c.value(),
            Expr::Var => x,
            Expr::Neg(inner) => -inner.eval_at(x)?,
            Expr::Binary(op, lhs, rhs) => {
                let l = lhs.eval_at(x)?;
                let r = rhs.eval_at(x)?;
                match op {
                    BinOp::Add => l + r,
                    BinOp::Sub => l - r,
                    BinOp::Mul => l * r,
                    BinOp::Div => {
                        if r == 0.0 {
                            return Err(EvalError::domain(x, self.to_string()));
                        }
                        l / r
                    }
                    BinOp::Pow => power(l, r),
                }
            }
            Expr::Call(func, arg) => {
                let v = arg.eval_at(x)?;
                match func {
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Tan => v.tan(),
                    Func::Sec => {
                        let c = v.cos();
                        if c == 0.0 {
                            return Err(EvalError::non_finite(x, self.to_string()));
                        }
                        c.recip()
                    }
                    Func::Exp => v.exp(),
                    Func::Ln => {
                        if v <= 0.0 {
                            return Err(EvalError::domain(x, self.to_string()));
                        }
                        v.ln()
                    }
                    Func::Sqrt => {
                        if v < 0.0 {
                            return Err(EvalError::domain(x, self.to_string()));
                        }
                        v.sqrt()
                    }
                    Func::Abs => v.abs(),
                }
            }
        };
        if value.is_nan() {
            Err(EvalError::domain(x, self.to_string()))
        } else if value.is_infinite() {
            Err(EvalError::non_finite(x, self.to_string()))
        } else {
            Ok(value)
        }
    }
}

// Small integer exponents go through repeated multiplication so that `x^2`
// is exactly `x*x`.
fn power(base: f64, exponent: f64) -> f64 {
    if exponent.fract() == 0.0 && exponent.abs() <= 64.0 {
        base.powi(exponent as i32)
    } else {
        base.powf(exponent)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Named(c) => f.write_str(c.name()),
            Expr::Var => f.write_str("x"),
            Expr::Neg(inner) => write!(f, "(-{inner})"),
            Expr::Binary(op, lhs, rhs) => write!(f, "({lhs} {} {rhs})", op.symbol()),
            Expr::Call(func, arg) => write!(f, "{}({arg})", func.name()),
        }
    }
}

impl std::str::FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn eval(text: &str, x: f64) -> Result<f64, EvalError> {
        parse(text).unwrap().evaluate(x)
    }

    #[test]
    fn square_at_half() {
        assert_eq!(eval("x^2", 0.5).unwrap(), 0.25);
    }

    #[test]
    fn sine_squared_vanishes_at_pi() {
        assert!(eval("sin(x)^2", PI).unwrap().abs() <= 1e-15);
    }

    #[test]
    fn sine_squared_is_square_of_sine() {
        // sin(pi/2) = 1 so (sin x)^2 = 1, while sin(x^2) at pi/2 is sin(2.467..) ~ 0.6243.
        let v = eval("sin(x)^2", PI / 2.0).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reciprocal_at_zero_is_domain_error() {
        let err = eval("1/x", 0.0).unwrap_err();
        assert_eq!(err.kind, EvalErrorKind::Domain);
        assert_eq!(err.input, 0.0);
        assert_eq!(err.node, "(1 / x)");
    }

    #[test]
    fn log_and_sqrt_domains() {
        assert_eq!(eval("ln(x)", 0.0).unwrap_err().kind, EvalErrorKind::Domain);
        assert_eq!(eval("ln(x)", -1.0).unwrap_err().kind, EvalErrorKind::Domain);
        assert_eq!(eval("sqrt(x)", -1e-300).unwrap_err().kind, EvalErrorKind::Domain);
        assert_eq!(eval("sqrt(x)", 0.0).unwrap(), 0.0);
    }

    #[test]
    fn overflow_is_non_finite() {
        let err = eval("exp(x)", 1000.0).unwrap_err();
        assert_eq!(err.kind, EvalErrorKind::NonFinite);
        assert_eq!(eval("x^x", 1e10).unwrap_err().kind, EvalErrorKind::NonFinite);
    }

    #[test]
    fn negative_base_fractional_power_is_domain_error() {
        assert_eq!(eval("x^0.5", -4.0).unwrap_err().kind, EvalErrorKind::Domain);
        assert_eq!(eval("x^3", -2.0).unwrap(), -8.0);
    }

    #[test]
    fn non_finite_input_rejected() {
        assert!(eval("x", f64::NAN).is_err());
        assert!(eval("x", f64::INFINITY).is_err());
    }

    #[test]
    fn precedence() {
        assert_eq!(eval("2+3*4", 0.0).unwrap(), 14.0);
        assert_eq!(eval("2^3^2", 0.0).unwrap(), 512.0);
        assert_eq!(eval("-2^2", 0.0).unwrap(), -4.0);
        assert_eq!(eval("(-2)^2", 0.0).unwrap(), 4.0);
        assert_eq!(eval("2^-1", 0.0).unwrap(), 0.5);
        assert_eq!(eval("8/4/2", 0.0).unwrap(), 1.0);
        assert_eq!(eval("8-4-2", 0.0).unwrap(), 2.0);
    }

    #[test]
    fn named_constants() {
        assert_eq!(eval("pi", 0.0).unwrap(), PI);
        assert_eq!(eval("e", 0.0).unwrap(), std::f64::consts::E);
        assert_eq!(eval("2e3", 0.0).unwrap(), 2000.0);
        assert_eq!(eval("2*e", 1.0).unwrap(), 2.0 * std::f64::consts::E);
    }

    #[test]
    fn secant_is_reciprocal_cosine() {
        let v = eval("sec(x)", 1.0).unwrap();
        assert_eq!(v, 1.0 / 1.0f64.cos());
    }

    #[test]
    fn display_is_fully_parenthesized() {
        let e = parse("-x^2 + 3*sin(x)").unwrap();
        assert_eq!(e.to_string(), "((-(x ^ 2)) + (3 * sin(x)))");
    }

    #[test]
    fn contains_var() {
        assert!(parse("sin(x)+1").unwrap().contains_var());
        assert!(!parse("pi/2").unwrap().contains_var());
    }
}
