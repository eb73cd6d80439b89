//! Python bindings for `statcalc-core`.
//!
//! Wherever a function is expected, Python callers may pass an expression
//! string, an `Expr`, a `TabularFunction`, or any callable taking and
//! returning a float.

use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use statcalc_core::derivative::{self, DaTolerances, DerivativeOptions, SecantMode};
use statcalc_core::mean_integral;
use statcalc_core::sampling;
use statcalc_core::tabular;
use statcalc_core::{Error, FunctionHandle, Interval, SamplePlan, Sampling, StudyStrategy};

create_exception!(statcalc, StatcalcError, PyValueError, "Invalid input or failed computation.");
create_exception!(statcalc, ParseError, StatcalcError, "Expression text could not be parsed.");
create_exception!(statcalc, EvaluationError, StatcalcError, "A function could not be evaluated at a point.");

fn to_py(e: Error) -> PyErr {
    if matches!(e, Error::Parse(_)) {
        ParseError::new_err(e.to_string())
    } else if e.is_evaluation() {
        EvaluationError::new_err(e.to_string())
    } else {
        StatcalcError::new_err(e.to_string())
    }
}

fn parse_err(e: statcalc_core::ParseError) -> PyErr {
    ParseError::new_err(e.to_string())
}

fn interval(a: f64, b: f64) -> PyResult<Interval> {
    Interval::new(a, b).map_err(to_py)
}

/// A parsed expression in the variable `x`.
#[pyclass(name = "Expr", module = "statcalc", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyExpr {
    inner: statcalc_core::Expr,
}

#[pymethods]
impl PyExpr {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        statcalc_core::parse(text).map(|inner| PyExpr { inner }).map_err(parse_err)
    }

    fn evaluate(&self, x: f64) -> PyResult<f64> {
        self.inner.evaluate(x).map_err(|e| to_py(e.into()))
    }

    fn __call__(&self, x: f64) -> PyResult<f64> {
        self.evaluate(x)
    }

    fn contains_var(&self) -> bool {
        self.inner.contains_var()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Expr('{}')", self.inner)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

/// Two-column data viewed as a piecewise-linear function.
#[pyclass(name = "TabularFunction", module = "statcalc", frozen, skip_from_py_object)]
struct PyTabular {
    inner: Arc<tabular::TabularFunction>,
}

#[pymethods]
impl PyTabular {
    #[new]
    #[pyo3(signature = (pairs, source = "python"))]
    fn new(pairs: Vec<(f64, f64)>, source: &str) -> PyResult<Self> {
        tabular::TabularFunction::from_pairs(&pairs, source)
            .map(|t| PyTabular { inner: Arc::new(t) })
            .map_err(to_py)
    }

    /// Reads a CSV file.
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let file = std::fs::File::open(path).map_err(|e| StatcalcError::new_err(format!("{path}: {e}")))?;
        tabular::load_csv(file, path)
            .map(|t| PyTabular { inner: Arc::new(t) })
            .map_err(to_py)
    }

    /// Parses CSV text.
    #[staticmethod]
    #[pyo3(signature = (text, source = "<text>"))]
    fn from_csv(text: &str, source: &str) -> PyResult<Self> {
        tabular::load_csv(text.as_bytes(), source)
            .map(|t| PyTabular { inner: Arc::new(t) })
            .map_err(to_py)
    }

    #[getter]
    fn xs(&self) -> Vec<f64> {
        self.inner.xs().to_vec()
    }

    #[getter]
    fn ys(&self) -> Vec<f64> {
        self.inner.ys().to_vec()
    }

    #[getter]
    fn source(&self) -> &str {
        self.inner.source()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn mean(&self) -> PyMean {
        tabular::tabular_mean(&self.inner).into()
    }

    fn integral(&self) -> PyResult<PyIntegral> {
        tabular::tabular_integral(&self.inner).map(Into::into).map_err(to_py)
    }

    fn interpolate(&self, x: f64) -> PyResult<f64> {
        tabular::interpolate(&self.inner, x).map_err(to_py)
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    fn __repr__(&self) -> String {
        format!("TabularFunction(source='{}', rows={})", self.inner.source(), self.inner.len())
    }
}

#[pyclass(name = "MeanEstimate", module = "statcalc", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyMean {
    mean: f64,
    n: usize,
    sample_stddev: f64,
    stderr: f64,
}

impl From<mean_integral::MeanEstimate> for PyMean {
    fn from(m: mean_integral::MeanEstimate) -> Self {
        PyMean {
            mean: m.mean,
            n: m.n,
            sample_stddev: m.sample_stddev,
            stderr: m.stderr,
        }
    }
}

#[pymethods]
impl PyMean {
    fn __repr__(&self) -> String {
        format!(
            "MeanEstimate(mean={}, n={}, sample_stddev={}, stderr={})",
            self.mean, self.n, self.sample_stddev, self.stderr
        )
    }
}

#[pyclass(name = "IntegralResult", module = "statcalc", frozen, get_all, skip_from_py_object)]
struct PyIntegral {
    value: f64,
    mean: PyMean,
    a: f64,
    b: f64,
    error_bar: f64,
}

impl From<mean_integral::IntegralResult> for PyIntegral {
    fn from(r: mean_integral::IntegralResult) -> Self {
        PyIntegral {
            value: r.value,
            mean: r.mean.into(),
            a: r.interval.a(),
            b: r.interval.b(),
            error_bar: r.error_bar,
        }
    }
}

#[pymethods]
impl PyIntegral {
    fn __repr__(&self) -> String {
        format!(
            "IntegralResult(value={}, a={}, b={}, error_bar={})",
            self.value, self.a, self.b, self.error_bar
        )
    }
}

#[pyclass(name = "AntiderivativeGrid", module = "statcalc", frozen, skip_from_py_object)]
struct PyGrid {
    inner: mean_integral::AntiderivativeGrid,
}

#[pymethods]
impl PyGrid {
    #[getter]
    fn base(&self) -> f64 {
        self.inner.base
    }

    #[getter]
    fn abscissae(&self) -> Vec<f64> {
        self.inner.abscissae.clone()
    }

    #[getter]
    fn values(&self) -> Vec<f64> {
        self.inner.values.clone()
    }

    #[getter]
    fn samples_per_node(&self) -> usize {
        self.inner.samples_per_node
    }

    fn nodes(&self) -> Vec<(f64, f64)> {
        self.inner.nodes().collect()
    }

    fn value_at(&self, x: f64) -> PyResult<f64> {
        self.inner.value_at(x).map_err(to_py)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

#[pyclass(name = "DerivativeEstimate", module = "statcalc", frozen, get_all, skip_from_py_object)]
struct PyDerivative {
    t1: f64,
    value: f64,
    /// `(h, slope)` for each secant taken.
    iterates: Vec<(f64, f64)>,
    converged: bool,
    achieved_delta: Option<f64>,
}

#[pymethods]
impl PyDerivative {
    fn __repr__(&self) -> String {
        format!(
            "DerivativeEstimate(t1={}, value={}, converged={}, iterates={})",
            self.t1,
            self.value,
            if self.converged { "True" } else { "False" },
            self.iterates.len()
        )
    }
}

#[pyclass(name = "DaPairReport", module = "statcalc", frozen, get_all, skip_from_py_object)]
struct PyDaPair {
    derivative: String,
    antiderivative: String,
    a: f64,
    b: f64,
    grid_count: usize,
    samples_per_node: usize,
    deriv_tol: f64,
    int_tol: f64,
    max_derivative_error: f64,
    worst_derivative_x: f64,
    max_integral_error: f64,
    worst_integral_x: f64,
    derivative_ok: bool,
    integral_ok: bool,
}

#[pymethods]
impl PyDaPair {
    fn passed(&self) -> bool {
        self.derivative_ok && self.integral_ok
    }

    fn __repr__(&self) -> String {
        format!(
            "DaPairReport(f='{}', F='{}', passed={})",
            self.derivative,
            self.antiderivative,
            if self.passed() { "True" } else { "False" }
        )
    }
}

/// Converts any accepted function-like object into a handle.
fn handle(obj: &Bound<'_, PyAny>) -> PyResult<FunctionHandle> {
    if let Ok(text) = obj.extract::<String>() {
        return FunctionHandle::parse(&text).map_err(parse_err);
    }
    if let Ok(e) = obj.cast::<PyExpr>() {
        return Ok(FunctionHandle::Expr(e.get().inner.clone()));
    }
    if let Ok(t) = obj.cast::<PyTabular>() {
        return Ok(FunctionHandle::Tabular(t.get().inner.clone()));
    }
    if obj.is_callable() {
        let name = obj
            .getattr("__name__")
            .and_then(|n| n.extract::<String>())
            .unwrap_or_else(|_| "<callable>".to_string());
        let callable: Py<PyAny> = obj.clone().unbind();
        // A Python exception or non-float result becomes NaN, which the
        // core reports as a domain error at that point.
        return Ok(FunctionHandle::builtin(name, move |x| {
            Python::attach(|py| {
                callable
                    .call1(py, (x,))
                    .and_then(|v| v.extract::<f64>(py))
                    .unwrap_or(f64::NAN)
            })
        }));
    }
    Err(StatcalcError::new_err(
        "expected an expression string, Expr, TabularFunction or callable",
    ))
}

fn plan(
    a: f64,
    b: f64,
    strategy: &str,
    n: usize,
    seed: u64,
    points: Option<Vec<f64>>,
    weighted: bool,
) -> PyResult<SamplePlan> {
    let sampling = template(strategy, n, seed, points, weighted)?;
    SamplePlan::new(interval(a, b)?, sampling).map_err(to_py)
}

fn template(strategy: &str, n: usize, seed: u64, points: Option<Vec<f64>>, weighted: bool) -> PyResult<Sampling> {
    match strategy {
        "uniform" => Ok(Sampling::Uniform { n }),
        "random" => Ok(Sampling::Random { n, seed }),
        "convenience" => Ok(Sampling::Convenience {
            points: points.ok_or_else(|| StatcalcError::new_err("convenience sampling needs points"))?,
            weighted,
        }),
        other => Err(StatcalcError::new_err(format!(
            "unknown strategy '{other}' (expected uniform, random or convenience)"
        ))),
    }
}

#[pyfunction]
fn parse(text: &str) -> PyResult<PyExpr> {
    PyExpr::new(text)
}

#[pyfunction]
fn uniform_sample(a: f64, b: f64, n: usize) -> PyResult<Vec<f64>> {
    sampling::uniform_sample(&interval(a, b)?, n).map_err(to_py)
}

#[pyfunction]
fn random_sample(a: f64, b: f64, n: usize, seed: u64) -> PyResult<Vec<f64>> {
    sampling::random_sample(&interval(a, b)?, n, seed).map_err(to_py)
}

#[pyfunction]
fn convenience_sample(a: f64, b: f64, points: Vec<f64>) -> PyResult<Vec<f64>> {
    sampling::convenience_sample(&interval(a, b)?, &points).map_err(to_py)
}

#[pyfunction]
fn arithmetic_mean(values: Vec<f64>) -> PyResult<PyMean> {
    mean_integral::arithmetic_mean(&values).map(Into::into).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (f, a, b, strategy = "uniform", n = 1000, seed = 0, points = None, weighted = false))]
#[allow(clippy::too_many_arguments)]
fn function_mean(
    f: &Bound<'_, PyAny>,
    a: f64,
    b: f64,
    strategy: &str,
    n: usize,
    seed: u64,
    points: Option<Vec<f64>>,
    weighted: bool,
) -> PyResult<PyMean> {
    let p = plan(a, b, strategy, n, seed, points, weighted)?;
    mean_integral::function_mean(&handle(f)?, &p).map(Into::into).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (f, a, b, strategy = "uniform", n = 1000, seed = 0, points = None, weighted = false))]
#[allow(clippy::too_many_arguments)]
fn integral(
    f: &Bound<'_, PyAny>,
    a: f64,
    b: f64,
    strategy: &str,
    n: usize,
    seed: u64,
    points: Option<Vec<f64>>,
    weighted: bool,
) -> PyResult<PyIntegral> {
    let p = plan(a, b, strategy, n, seed, points, weighted)?;
    mean_integral::integral(&handle(f)?, &p).map(Into::into).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (f, a, x_max, grid = 21, n = 10_000, strategy = "uniform", seed = 0))]
fn antiderivative_grid(
    f: &Bound<'_, PyAny>,
    a: f64,
    x_max: f64,
    grid: usize,
    n: usize,
    strategy: &str,
    seed: u64,
) -> PyResult<PyGrid> {
    let t = template(strategy, n, seed, None, false)?;
    mean_integral::antiderivative_grid(&handle(f)?, a, x_max, grid, &t)
        .map(|inner| PyGrid { inner })
        .map_err(to_py)
}

/// `F(d) - F(c)`; `big_f` may also be an `AntiderivativeGrid`.
#[pyfunction]
fn ftc_evaluate(big_f: &Bound<'_, PyAny>, c: f64, d: f64) -> PyResult<f64> {
    if let Ok(g) = big_f.cast::<PyGrid>() {
        return mean_integral::ftc_evaluate(&g.get().inner, c, d).map_err(to_py);
    }
    mean_integral::ftc_evaluate(&handle(big_f)?, c, d).map_err(to_py)
}

/// Runs a convergence study and returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (f, a, b, sizes, strategies = vec!["uniform".to_string(), "random".to_string()], trials = 3, seed = 2014))]
#[allow(clippy::too_many_arguments)]
fn convergence_study<'py>(
    py: Python<'py>,
    f: &Bound<'py, PyAny>,
    a: f64,
    b: f64,
    sizes: Vec<usize>,
    strategies: Vec<String>,
    trials: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let strategies = strategies
        .iter()
        .map(|s| match s.as_str() {
            "uniform" => Ok(StudyStrategy::Uniform),
            "random" => Ok(StudyStrategy::Random),
            other => Err(StatcalcError::new_err(format!("unknown strategy '{other}'"))),
        })
        .collect::<PyResult<Vec<_>>>()?;
    let report = mean_integral::convergence_study(&handle(f)?, interval(a, b)?, &sizes, &strategies, trials, seed)
        .map_err(to_py)?;
    let text = serde_json::to_string(&report).map_err(|e| StatcalcError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pyfunction]
fn graphic_mean(s: &Bound<'_, PyAny>, t1: f64, t2: f64) -> PyResult<f64> {
    derivative::graphic_mean(&handle(s)?, t1, t2).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (s, t1, h0 = 0.1, ratio = 0.5, tol = 1e-8, max_iter = 40, central = false))]
fn derivative_at(
    s: &Bound<'_, PyAny>,
    t1: f64,
    h0: f64,
    ratio: f64,
    tol: f64,
    max_iter: usize,
    central: bool,
) -> PyResult<PyDerivative> {
    let options = DerivativeOptions {
        h0,
        ratio,
        tol,
        max_iter,
        mode: if central { SecantMode::Central } else { SecantMode::Forward },
    };
    let e = derivative::derivative_at(&handle(s)?, t1, &options).map_err(to_py)?;
    Ok(PyDerivative {
        t1: e.t1,
        value: e.value,
        iterates: e.iterates.iter().map(|it| (it.h, it.slope)).collect(),
        converged: e.converged,
        achieved_delta: e.achieved_delta,
    })
}

#[pyfunction]
#[pyo3(signature = (f, big_f, a, b, grid = 25, n = 100_000, deriv_tol = 1e-4, int_tol = 2e-3))]
#[allow(clippy::too_many_arguments)]
fn verify_da_pair(
    f: &Bound<'_, PyAny>,
    big_f: &Bound<'_, PyAny>,
    a: f64,
    b: f64,
    grid: usize,
    n: usize,
    deriv_tol: f64,
    int_tol: f64,
) -> PyResult<PyDaPair> {
    let r = derivative::verify_da_pair(
        &handle(f)?,
        &handle(big_f)?,
        interval(a, b)?,
        grid,
        DaTolerances {
            derivative: deriv_tol,
            integral: int_tol,
        },
        &Sampling::Uniform { n },
    )
    .map_err(to_py)?;
    Ok(PyDaPair {
        derivative: r.derivative,
        antiderivative: r.antiderivative,
        a: r.interval.a(),
        b: r.interval.b(),
        grid_count: r.grid_count,
        samples_per_node: r.samples_per_node,
        deriv_tol: r.deriv_tol,
        int_tol: r.int_tol,
        max_derivative_error: r.max_derivative_error,
        worst_derivative_x: r.worst_derivative_x,
        max_integral_error: r.max_integral_error,
        worst_integral_x: r.worst_integral_x,
        derivative_ok: r.derivative_ok,
        integral_ok: r.integral_ok,
    })
}

/// The built-in derivative/antiderivative pairs as a list of dicts.
#[pyfunction]
fn builtin_da_table(py: Python<'_>) -> PyResult<Vec<Bound<'_, PyDict>>> {
    statcalc_core::builtin_da_table()
        .into_iter()
        .map(|p| {
            let d = PyDict::new(py);
            d.set_item("name", p.name)?;
            d.set_item("family", p.family)?;
            d.set_item("derivative", PyExpr { inner: p.derivative })?;
            d.set_item("antiderivative", PyExpr { inner: p.antiderivative })?;
            d.set_item("interval", (p.interval.a(), p.interval.b()))?;
            Ok(d)
        })
        .collect()
}

#[pyfunction]
fn fredericksburg_sat() -> PyTabular {
    PyTabular {
        inner: Arc::new(tabular::fredericksburg_sat()),
    }
}

#[pymodule]
fn statcalc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("StatcalcError", py.get_type::<StatcalcError>())?;
    m.add("ParseError", py.get_type::<ParseError>())?;
    m.add("EvaluationError", py.get_type::<EvaluationError>())?;
    m.add("SHIPPED_SEEDS", statcalc_core::SHIPPED_SEEDS.to_vec())?;
    m.add_class::<PyExpr>()?;
    m.add_class::<PyTabular>()?;
    m.add_class::<PyMean>()?;
    m.add_class::<PyIntegral>()?;
    m.add_class::<PyGrid>()?;
    m.add_class::<PyDerivative>()?;
    m.add_class::<PyDaPair>()?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(uniform_sample, m)?)?;
    m.add_function(wrap_pyfunction!(random_sample, m)?)?;
    m.add_function(wrap_pyfunction!(convenience_sample, m)?)?;
    m.add_function(wrap_pyfunction!(arithmetic_mean, m)?)?;
    m.add_function(wrap_pyfunction!(function_mean, m)?)?;
    m.add_function(wrap_pyfunction!(integral, m)?)?;
    m.add_function(wrap_pyfunction!(antiderivative_grid, m)?)?;
    m.add_function(wrap_pyfunction!(ftc_evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(convergence_study, m)?)?;
    m.add_function(wrap_pyfunction!(graphic_mean, m)?)?;
    m.add_function(wrap_pyfunction!(derivative_at, m)?)?;
    m.add_function(wrap_pyfunction!(verify_da_pair, m)?)?;
    m.add_function(wrap_pyfunction!(builtin_da_table, m)?)?;
    m.add_function(wrap_pyfunction!(fredericksburg_sat, m)?)?;
    Ok(())
}
