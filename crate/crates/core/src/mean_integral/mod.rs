//! Arithmetic means of samples, function averages and mean-based integrals.
//!
//! The integral of `f` over `[a, b]` is `(b - a)` times the average of `f`,
//! and the average is estimated by the arithmetic mean of `f` at the points
//! of a [`SamplePlan`]. With uniform sampling this is the right-endpoint
//! rectangle rule, whose `O(h)` bias is visible in small samples (the mean
//! of `x` on `[0, 1]` with 100 points is 0.505, not 0.5) and is left
//! uncorrected.

mod antiderivative;
mod convergence;
mod summation;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::FunctionHandle;
use crate::sampling::{Interval, SamplePlan, Sampling};

pub use antiderivative::{antiderivative_grid, ftc_evaluate, Antiderivative, AntiderivativeGrid};
pub use convergence::{convergence_study, round_display, ConvergenceCell, ConvergenceReport, ConvergenceRow, RowKind, StudyStrategy};
pub(crate) use antiderivative::instantiate;
pub use summation::{compensated_sum, CompensatedSum};

/// Mean of `n` samples with its sample standard deviation `s` (divisor
/// `n - 1`, zero when `n = 1`) and standard error `s / sqrt(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub n: usize,
    pub sample_stddev: f64,
    pub stderr: f64,
}

impl MeanEstimate {
    fn from_parts(mean: f64, n: usize, sample_stddev: f64) -> Self {
        MeanEstimate {
            mean,
            n,
            sample_stddev,
            stderr: sample_stddev / (n as f64).sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult {
    pub value: f64,
    pub mean: MeanEstimate,
    pub interval: Interval,
    /// `(b - a) * stderr`.
    pub error_bar: f64,
}

impl IntegralResult {
    pub fn from_mean(interval: Interval, mean: MeanEstimate) -> Self {
        let width = interval.width();
        IntegralResult {
            value: width * mean.mean,
            mean,
            interval,
            error_bar: width * mean.stderr,
        }
    }
}

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite {
            index,
            value: values[index],
        }),
        None => Ok(()),
    }
}

/// Arithmetic mean of `values`.
///
/// The sum is compensated and taken in input order. One correction pass
/// over the residuals follows, which makes the mean of identical values
/// exactly that value.
pub fn arithmetic_mean(values: &[f64]) -> Result<MeanEstimate> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    check_finite(values)?;
    let n = values.len();
    let count = n as f64;
    let rough = compensated_sum(values.iter().copied()) / count;
    let mean = rough + compensated_sum(values.iter().map(|v| v - rough)) / count;
    let stddev = if n == 1 {
        0.0
    } else {
        let squares = compensated_sum(values.iter().map(|v| (v - mean) * (v - mean)));
        (squares.max(0.0) / (count - 1.0)).sqrt()
    };
    Ok(MeanEstimate::from_parts(mean, n, stddev))
}

/// Spacing-weighted mean of values sampled at sorted `points`.
///
/// Interior weights are `(x[i+1] - x[i-1]) / 2`, the end weights are the
/// one-sided half gaps. Falls back to the plain mean when every weight is
/// zero (a single point, or all points coincide).
pub fn spacing_weighted_mean(points: &[f64], values: &[f64]) -> Result<MeanEstimate> {
    if points.len() != values.len() {
        return Err(Error::InvalidArgument(format!(
            "{} points but {} values",
            points.len(),
            values.len()
        )));
    }
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    check_finite(values)?;
    let n = points.len();
    if n < 2 {
        return arithmetic_mean(values);
    }
    let weights: Vec<f64> = (0..n)
        .map(|i| {
            let lo = points[i.saturating_sub(1)];
            let hi = points[(i + 1).min(n - 1)];
            (hi - lo) / 2.0
        })
        .collect();
    let total = compensated_sum(weights.iter().copied());
    if total <= 0.0 {
        return arithmetic_mean(values);
    }
    let mean = compensated_sum(weights.iter().zip(values).map(|(w, v)| w * v)) / total;
    let spread = compensated_sum(
        weights
            .iter()
            .zip(values)
            .map(|(w, v)| w * (v - mean) * (v - mean)),
    ) / total;
    let count = n as f64;
    let stddev = (spread.max(0.0) * count / (count - 1.0)).sqrt();
    Ok(MeanEstimate::from_parts(mean, n, stddev))
}

fn evaluate_all(f: &FunctionHandle, points: &[f64]) -> Result<Vec<f64>> {
    points
        .iter()
        .map(|&x| f.eval(x).map_err(Error::from))
        .collect()
}

/// Estimated average of `f` over the plan's interval.
pub fn function_mean(f: &FunctionHandle, plan: &SamplePlan) -> Result<MeanEstimate> {
    let points = plan.points();
    let values = evaluate_all(f, &points)?;
    match plan.sampling {
        Sampling::Convenience { weighted: true, .. } => spacing_weighted_mean(&points, &values),
        _ => arithmetic_mean(&values),
    }
}

/// `I[f, a, b] = (b - a) * mean`.
pub fn integral(f: &FunctionHandle, plan: &SamplePlan) -> Result<IntegralResult> {
    let mean = function_mean(f, plan)?;
    Ok(IntegralResult::from_mean(plan.interval, mean))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::EvalErrorKind;

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    fn f(text: &str) -> FunctionHandle {
        FunctionHandle::parse(text).unwrap()
    }

    #[test]
    fn mean_of_one_to_four() {
        let m = arithmetic_mean(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        // s^2 = (2.25 + 0.25 + 0.25 + 2.25) / 3 = 5/3
        let s = (5.0f64 / 3.0).sqrt();
        assert_eq!(m.mean, 2.5);
        assert!((m.sample_stddev - s).abs() < 1e-15);
        assert!((m.stderr - s / 2.0).abs() < 1e-15);
        assert!((m.sample_stddev - 1.290994).abs() < 1e-6);
        assert!((m.stderr - 0.645497).abs() < 1e-6);
    }

    #[test]
    fn mean_of_constant_is_exact() {
        for c in [0.1, -7.3, 1e-300, 123456.789] {
            let m = arithmetic_mean(&[c; 1000]).unwrap();
            assert_eq!(m.mean, c);
            assert_eq!(m.sample_stddev, 0.0);
            assert_eq!(m.stderr, 0.0);
        }
        let m = arithmetic_mean(&[3.0]).unwrap();
        assert_eq!((m.mean, m.sample_stddev, m.n), (3.0, 0.0, 1));
    }

    #[test]
    fn mean_rejects_empty_and_non_finite() {
        assert_eq!(arithmetic_mean(&[]), Err(Error::EmptySample));
        assert!(matches!(
            arithmetic_mean(&[1.0, f64::NAN]),
            Err(Error::NonFinite { index: 1, .. })
        ));
    }

    #[test]
    fn uniform_mean_of_identity() {
        let plan = SamplePlan::uniform(unit(), 100).unwrap();
        let m = function_mean(&f("x"), &plan).unwrap();
        assert!((m.mean - 0.505).abs() <= 1e-12);
    }

    #[test]
    fn uniform_mean_of_square_matches_closed_form() {
        for n in [1usize, 10, 100, 1000, 10_000] {
            let plan = SamplePlan::uniform(unit(), n).unwrap();
            let m = function_mean(&f("x^2"), &plan).unwrap();
            let nf = n as f64;
            let exact = (nf + 1.0) * (2.0 * nf + 1.0) / (6.0 * nf * nf);
            assert!((m.mean - exact).abs() <= 1e-12 * exact, "n = {n}");
        }
    }

    #[test]
    fn integral_scales_mean_by_width() {
        let iv = Interval::new(1.0, 4.0).unwrap();
        let plan = SamplePlan::uniform(iv, 3).unwrap();
        // points 2, 3, 4 -> mean 3, integral 9
        let r = integral(&f("x"), &plan).unwrap();
        assert_eq!(r.value, 9.0);
        assert_eq!(r.error_bar, 3.0 * r.mean.stderr);
        assert_eq!(r.value, iv.width() * r.mean.mean);
    }

    #[test]
    fn evaluation_error_names_the_point() {
        let iv = Interval::new(-1.0, 1.0).unwrap();
        let plan = SamplePlan::uniform(iv, 2).unwrap();
        match function_mean(&f("1/x"), &plan) {
            Err(Error::Eval(e)) => {
                assert_eq!(e.kind, EvalErrorKind::Domain);
                assert_eq!(e.input, 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn convenience_plain_and_weighted() {
        let iv = Interval::new(0.0, 10.0).unwrap();
        let points = vec![0.0, 1.0, 2.0, 10.0];
        let plain = SamplePlan::convenience(iv, points.clone()).unwrap();
        let m = function_mean(&f("x"), &plain).unwrap();
        assert_eq!(m.mean, 13.0 / 4.0);

        let weighted = SamplePlan::new(
            iv,
            Sampling::Convenience {
                points,
                weighted: true,
            },
        )
        .unwrap();
        // weights 0.5, 1, 4.5, 4 (total 10): (0 + 1 + 9 + 40) / 10 = 5
        let m = function_mean(&f("x"), &weighted).unwrap();
        assert!((m.mean - 5.0).abs() < 1e-15);
    }

    #[test]
    fn weighted_mean_degenerate_falls_back() {
        let m = spacing_weighted_mean(&[2.0, 2.0], &[1.0, 3.0]).unwrap();
        assert_eq!(m.mean, 2.0);
        assert!(spacing_weighted_mean(&[1.0], &[1.0, 2.0]).is_err());
    }
}
