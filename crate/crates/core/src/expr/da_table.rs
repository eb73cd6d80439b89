use super::{parse, Expr};
use crate::sampling::Interval;

/// A derivative/antiderivative pair `(f, F)` with `F' = f`.
#[derive(Debug, Clone, PartialEq)]
pub struct DaPair {
    /// Lookup key, e.g. `"power n=4"` or `"cosine"`.
    pub name: &'static str,
    /// Family the pair belongs to; the power family appears once per exponent.
    pub family: &'static str,
    pub derivative: Expr,
    pub antiderivative: Expr,
    /// Interval on which both functions are smooth, used for verification.
    pub interval: Interval,
}

const TABLE: [(&str, &str, &str, &str, f64, f64); 8] = [
    ("power n=1", "power", "x", "x^2/2", 0.0, 2.0),
    ("power n=2", "power", "x^2", "x^3/3", 0.0, 2.0),
    ("power n=4", "power", "x^4", "x^5/5", 0.0, 2.0),
    ("exp", "exponential", "e^x", "e^x", 0.0, 2.0),
    ("log", "logarithm", "1/x", "ln(x)", 0.5, 2.0),
    ("sine", "sine", "cos(x)", "sin(x)", 0.0, 3.0),
    ("cosine", "cosine", "-sin(x)", "cos(x)", 0.0, 3.0),
    ("tangent", "tangent", "sec(x)^2", "tan(x)", 0.0, 1.0),
];

/// The built-in pairs: the power rule at n = 1, 2, 4, then the exponential,
/// logarithm, sine, cosine and tangent pairs.
pub fn builtin_da_table() -> Vec<DaPair> {
    TABLE
        .iter()
        .map(|&(name, family, f, big_f, a, b)| DaPair {
            name,
            family,
            derivative: parse(f).expect("built-in derivative parses"),
            antiderivative: parse(big_f).expect("built-in antiderivative parses"),
            interval: Interval::new(a, b).expect("built-in interval is valid"),
        })
        .collect()
}

pub fn find_da_pair(name: &str) -> Option<DaPair> {
    builtin_da_table().into_iter().find(|p| p.name == name)
}
