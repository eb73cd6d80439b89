use serde::{Deserialize, Serialize};

use super::integral;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::function::FunctionHandle;
use crate::sampling::{Interval, SamplePlan, Sampling};
use crate::tabular::interpolate_nodes;

/// `F(x) = I[f, a, x]` tabulated on a uniform grid over `[a, x_max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AntiderivativeGrid {
    pub base: f64,
    pub abscissae: Vec<f64>,
    pub values: Vec<f64>,
    pub samples_per_node: usize,
}

impl AntiderivativeGrid {
    pub fn len(&self) -> usize {
        self.abscissae.len()
    }

    pub fn is_empty(&self) -> bool {
        self.abscissae.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.abscissae.iter().copied().zip(self.values.iter().copied())
    }

    /// Piecewise-linear value between nodes; exact at nodes.
    pub fn value_at(&self, x: f64) -> Result<f64> {
        interpolate_nodes(&self.abscissae, &self.values, x).ok_or(Error::OutOfRange {
            value: x,
            lo: self.abscissae[0],
            hi: self.abscissae[self.abscissae.len() - 1],
        })
    }
}

/// Binds a plan template to `iv`. Random templates keep their seed, so
/// every node reuses the same unit draws rescaled to its own interval; for
/// a non-negative, non-decreasing `f` this keeps `F` non-decreasing.
pub(crate) fn instantiate(template: &Sampling, iv: Interval) -> Result<SamplePlan> {
    let sampling = match template {
        Sampling::Uniform { n } => Sampling::Uniform { n: *n },
        Sampling::Random { n, seed } => Sampling::Random { n: *n, seed: *seed },
        Sampling::Convenience { .. } => {
            return Err(Error::InvalidArgument(
                "convenience points cannot be re-instantiated over a new interval".into(),
            ))
        }
    };
    SamplePlan::new(iv, sampling)
}

/// Tabulates `F(x_j) = I[f, a, x_j]` at `grid_count` uniformly spaced nodes
/// from `a` to `x_max`, each integral using a fresh instance of `template`.
pub fn antiderivative_grid(
    f: &FunctionHandle,
    a: f64,
    x_max: f64,
    grid_count: usize,
    template: &Sampling,
) -> Result<AntiderivativeGrid> {
    let span = Interval::new(a, x_max)?;
    if grid_count < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid needs at least 2 nodes, got {grid_count}"
        )));
    }
    if template.count() == 0 {
        return Err(Error::ZeroSamples);
    }
    let step = span.width() / (grid_count - 1) as f64;
    let mut abscissae: Vec<f64> = (0..grid_count).map(|j| a + j as f64 * step).collect();
    abscissae[grid_count - 1] = x_max;

    let mut values = Vec::with_capacity(grid_count);
    values.push(0.0);
    for (j, &x) in abscissae.iter().enumerate().skip(1) {
        let plan = instantiate(template, Interval::new(a, x)?)?;
        let r = integral(f, &plan).map_err(|e| e.at_node(j, x))?;
        values.push(r.value);
    }
    Ok(AntiderivativeGrid {
        base: a,
        abscissae,
        values,
        samples_per_node: template.count(),
    })
}

/// Anything that can serve as `F` in `I[f, c, d] = F(d) - F(c)`.
pub trait Antiderivative {
    fn value_at(&self, x: f64) -> Result<f64>;
}

impl Antiderivative for Expr {
    fn value_at(&self, x: f64) -> Result<f64> {
        Ok(self.evaluate(x)?)
    }
}

impl Antiderivative for FunctionHandle {
    fn value_at(&self, x: f64) -> Result<f64> {
        Ok(self.eval(x)?)
    }
}

impl Antiderivative for AntiderivativeGrid {
    fn value_at(&self, x: f64) -> Result<f64> {
        AntiderivativeGrid::value_at(self, x)
    }
}

/// `I[f, c, d] = F(d) - F(c)`.
pub fn ftc_evaluate<A: Antiderivative + ?Sized>(big_f: &A, c: f64, d: f64) -> Result<f64> {
    let upper = big_f.value_at(d)?;
    let lower = big_f.value_at(c)?;
    Ok(upper - lower)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use std::f64::consts::PI;

    fn f(text: &str) -> FunctionHandle {
        FunctionHandle::parse(text).unwrap()
    }

    #[test]
    fn constant_one_gives_identity() {
        let grid = antiderivative_grid(&f("1"), 0.5, 3.0, 6, &Sampling::Random { n: 37, seed: 3 }).unwrap();
        for (x, big_f) in grid.nodes() {
            assert_eq!(big_f, x - 0.5);
        }
        assert_eq!(grid.values[0], 0.0);
    }

    #[test]
    fn square_at_one() {
        let grid = antiderivative_grid(&f("x^2"), 0.0, 1.0, 2, &Sampling::Uniform { n: 1_000_000 }).unwrap();
        assert!((grid.values[1] - 1.0 / 3.0).abs() <= 1e-5);
    }

    #[test]
    fn identity_at_two_carries_right_endpoint_bias() {
        // Uniform mean of x over [0, 2] with n points is (n + 1) / n, so
        // F(2) = 2 (n + 1) / n = 2.0002 for n = 10^4.
        let grid = antiderivative_grid(&f("x"), 0.0, 2.0, 3, &Sampling::Uniform { n: 10_000 }).unwrap();
        assert!((grid.values[2] - 2.0002).abs() <= 1e-12);
        assert_eq!(grid.abscissae, vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn grid_rejects_bad_arguments() {
        let t = Sampling::Uniform { n: 10 };
        assert!(antiderivative_grid(&f("x"), 1.0, 1.0, 5, &t).is_err());
        assert!(antiderivative_grid(&f("x"), 0.0, 1.0, 1, &t).is_err());
        let conv = Sampling::Convenience { points: vec![0.5], weighted: false };
        assert!(antiderivative_grid(&f("x"), 0.0, 1.0, 3, &conv).is_err());
    }

    #[test]
    fn grid_error_carries_node_index() {
        let err = antiderivative_grid(&f("1/(x-1)"), 0.0, 2.0, 3, &Sampling::Uniform { n: 4 }).unwrap_err();
        match err {
            Error::AtNode { index, x, .. } => assert_eq!((index, x), (1, 1.0)),
            other => panic!("{other:?}"),
        }
        assert!(antiderivative_grid(&f("1/(x-1)"), 0.0, 2.0, 3, &Sampling::Uniform { n: 4 })
            .unwrap_err()
            .is_evaluation());
    }

    #[test]
    fn ftc_with_expressions() {
        let cube = parse("x^3/3").unwrap();
        assert!((ftc_evaluate(&cube, 0.0, 1.0).unwrap() - 1.0 / 3.0).abs() <= 1e-12);
        let half = parse("(1/2)*(x - sin(x)*cos(x))").unwrap();
        assert!((ftc_evaluate(&half, 0.0, PI).unwrap() - PI / 2.0).abs() <= 1e-12);
        assert_eq!(ftc_evaluate(&half, 1.3, 1.3).unwrap(), 0.0);
    }

    #[test]
    fn ftc_with_grid_interpolates_and_checks_range() {
        let grid = AntiderivativeGrid {
            base: 0.0,
            abscissae: vec![0.0, 1.0, 2.0],
            values: vec![0.0, 1.0, 4.0],
            samples_per_node: 1,
        };
        assert_eq!(ftc_evaluate(&grid, 0.5, 1.5).unwrap(), 2.5 - 0.5);
        assert_eq!(ftc_evaluate(&grid, 1.0, 1.0).unwrap(), 0.0);
        assert!(matches!(
            ftc_evaluate(&grid, 0.0, 2.5),
            Err(Error::OutOfRange { value, .. }) if value == 2.5
        ));
    }

    #[test]
    fn ftc_domain_error_propagates() {
        let ln = parse("ln(x)").unwrap();
        assert!(ftc_evaluate(&ln, 0.0, 1.0).unwrap_err().is_evaluation());
    }
}
