//! Graphic means and derivatives as their limit.
//!
//! The graphic mean of `s` over `[t1, t2]` is the secant slope
//! `(s(t2) - s(t1)) / (t2 - t1)`. The derivative at `t1` is estimated by a
//! sequence of forward graphic means with `t2 = t1 + h0 * ratio^k`, stopped
//! when two successive slopes agree to within `tol`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::FunctionHandle;
use crate::mean_integral::{instantiate, integral};
use crate::sampling::{Interval, Sampling};

/// Secant slope of `s` between `t1` and `t2`. Symmetric in its arguments.
pub fn graphic_mean(s: &FunctionHandle, t1: f64, t2: f64) -> Result<f64> {
    if t1 == t2 {
        return Err(Error::CoincidentPoints(t1));
    }
    let s1 = s.eval(t1)?;
    let s2 = s.eval(t2)?;
    Ok((s2 - s1) / (t2 - t1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SecantMode {
    /// `[t1, t1 + h]`.
    Forward,
    /// `[t1 - h, t1 + h]`; second-order accurate but needs `s` left of `t1`.
    Central,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivativeOptions {
    pub h0: f64,
    pub ratio: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub mode: SecantMode,
}

impl Default for DerivativeOptions {
    fn default() -> Self {
        DerivativeOptions {
            h0: 0.1,
            ratio: 0.5,
            tol: 1e-8,
            max_iter: 40,
            mode: SecantMode::Forward,
        }
    }
}

impl DerivativeOptions {
    fn validate(&self) -> Result<()> {
        if !(self.h0.is_finite() && self.h0 > 0.0) {
            return Err(Error::InvalidArgument(format!("h0 must be positive, got {}", self.h0)));
        }
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "ratio must lie in (0, 1), got {}",
                self.ratio
            )));
        }
        if self.tol.is_nan() || self.tol < 0.0 {
            return Err(Error::InvalidArgument(format!("tol must be non-negative, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecantIterate {
    pub h: f64,
    pub slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivativeEstimate {
    pub t1: f64,
    pub value: f64,
    pub iterates: Vec<SecantIterate>,
    pub converged: bool,
    /// `|last - previous|`; absent when only one iterate was taken.
    pub achieved_delta: Option<f64>,
}

/// Smallest step taken before giving up: below this the secant is
/// dominated by cancellation in `s(t2) - s(t1)`.
fn step_floor(t1: f64) -> f64 {
    (-30f64).exp2() * t1.abs().max(1.0)
}

/// Estimates `s'(t1)` as the limit of graphic means over shrinking
/// intervals. Non-convergence is reported through `converged`, not as an
/// error.
pub fn derivative_at(
    s: &FunctionHandle,
    t1: f64,
    options: &DerivativeOptions,
) -> Result<DerivativeEstimate> {
    options.validate()?;
    if !t1.is_finite() {
        return Err(Error::InvalidArgument(format!("t1 must be finite, got {t1}")));
    }
    let floor = step_floor(t1);
    let mut iterates: Vec<SecantIterate> = Vec::new();
    let mut converged = false;
    let mut delta = None;
    let mut h = options.h0;
    for _ in 0..options.max_iter {
        if h < floor {
            break;
        }
        let (lo, hi) = match options.mode {
            SecantMode::Forward => (t1, t1 + h),
            SecantMode::Central => (t1 - h, t1 + h),
        };
        let slope = graphic_mean(s, lo, hi).map_err(|e| Error::AtStep {
            h,
            source: Box::new(e),
        })?;
        if let Some(prev) = iterates.last() {
            let d = (slope - prev.slope).abs();
            delta = Some(d);
            if d <= options.tol {
                converged = true;
            }
        }
        iterates.push(SecantIterate { h, slope });
        if converged {
            break;
        }
        h *= options.ratio;
    }
    let value = iterates
        .last()
        .map(|it| it.slope)
        .ok_or_else(|| Error::InvalidArgument(format!("h0 = {} is below the step floor {floor}", options.h0)))?;
    Ok(DerivativeEstimate {
        t1,
        value,
        iterates,
        converged,
        achieved_delta: delta,
    })
}

/// Outcome of checking a claimed pair `(f, F)` in both directions:
/// `F' = f` (derivative) and `I[f, a, x] = F(x) - F(a)` (integral).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DaPairReport {
    pub derivative: String,
    pub antiderivative: String,
    pub interval: Interval,
    pub grid_count: usize,
    pub samples_per_node: usize,
    pub deriv_tol: f64,
    pub int_tol: f64,
    pub max_derivative_error: f64,
    pub worst_derivative_x: f64,
    pub max_integral_error: f64,
    pub worst_integral_x: f64,
    pub derivative_ok: bool,
    pub integral_ok: bool,
}

impl DaPairReport {
    pub fn passed(&self) -> bool {
        self.derivative_ok && self.integral_ok
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DaTolerances {
    pub derivative: f64,
    pub integral: f64,
}

impl Default for DaTolerances {
    fn default() -> Self {
        DaTolerances {
            derivative: 1e-4,
            integral: 2e-3,
        }
    }
}

/// Verifies `(f, F)` on `grid_count` uniformly spaced points of `iv`
/// (endpoints included). Secants are one-sided forward, so `F` need not be
/// defined left of `iv`; it must be defined a little to the right of `b`.
pub fn verify_da_pair(
    f: &FunctionHandle,
    big_f: &FunctionHandle,
    iv: Interval,
    grid_count: usize,
    tolerances: DaTolerances,
    int_plan: &Sampling,
) -> Result<DaPairReport> {
    if grid_count < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid needs at least 2 points, got {grid_count}"
        )));
    }
    let (a, b) = (iv.a(), iv.b());
    let step = iv.width() / (grid_count - 1) as f64;
    let grid: Vec<f64> = (0..grid_count)
        .map(|j| if j + 1 == grid_count { b } else { a + j as f64 * step })
        .collect();

    let options = DerivativeOptions::default();
    let base = big_f.eval(a).map_err(|e| Error::from(e).at_node(0, a))?;
    let mut worst_d = (0.0f64, a);
    let mut worst_i = (0.0f64, a);
    for (j, &x) in grid.iter().enumerate() {
        let annotate = |e: Error| e.at_node(j, x);
        let numeric = derivative_at(big_f, x, &options).map_err(annotate)?;
        let target = f.eval(x).map_err(|e| annotate(e.into()))?;
        let d_err = (numeric.value - target).abs();
        if d_err > worst_d.0 {
            worst_d = (d_err, x);
        }
        if j > 0 {
            let plan = instantiate(int_plan, Interval::new(a, x)?)?;
            let area = integral(f, &plan).map_err(annotate)?.value;
            let exact = big_f.eval(x).map_err(|e| annotate(e.into()))? - base;
            let i_err = (area - exact).abs();
            if i_err > worst_i.0 {
                worst_i = (i_err, x);
            }
        }
    }
    Ok(DaPairReport {
        derivative: f.to_string(),
        antiderivative: big_f.to_string(),
        interval: iv,
        grid_count,
        samples_per_node: int_plan.count(),
        deriv_tol: tolerances.derivative,
        int_tol: tolerances.integral,
        max_derivative_error: worst_d.0,
        worst_derivative_x: worst_d.1,
        max_integral_error: worst_i.0,
        worst_integral_x: worst_i.1,
        derivative_ok: worst_d.0 <= tolerances.derivative,
        integral_ok: worst_i.0 <= tolerances.integral,
    })
}
