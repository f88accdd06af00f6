use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyString;

use hypsum_core::clausen;
use hypsum_core::closed;
use hypsum_core::digamma::{self, Route};
use hypsum_core::error::Error;
use hypsum_core::expr::parse_expr;
use hypsum_core::hp::PrecisionContext;
use hypsum_core::rational::{parse_rational, render_rational, Rational};
use hypsum_core::series::{rational_sci, SeriesEstimate};
use hypsum_core::theorems::{self, Thresholds, VerifyReport};

create_exception!(hypsum, HypsumError, PyValueError);

fn to_py(e: Error) -> PyErr {
    HypsumError::new_err(e.to_string())
}

/// Accepts "p/q" strings, ints and fractions.Fraction.
fn rational_arg(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if let Ok(s) = obj.cast::<PyString>() {
        return parse_rational(&s.to_cow()?).map_err(to_py);
    }
    let n = obj.getattr("numerator")?.str()?.to_string();
    let d = obj.getattr("denominator")?.str()?.to_string();
    parse_rational(&format!("{n}/{d}")).map_err(to_py)
}

fn context(digits: u32) -> PyResult<PrecisionContext> {
    PrecisionContext::new(digits).map_err(to_py)
}

fn route_arg(route: &str) -> PyResult<Route> {
    route.parse().map_err(to_py)
}

/// A finite combination of gamma, logarithms, pi*cot and cos*ln(sin) terms.
#[pyclass(name = "ClosedForm", module = "hypsum", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyClosedForm(closed::ClosedForm);

#[pymethods]
impl PyClosedForm {
    fn render(&self) -> String {
        self.0.render()
    }

    /// The value to `digits` significant digits.
    #[pyo3(signature = (digits = 50))]
    fn evaluate(&self, digits: u32) -> PyResult<String> {
        let ctx = context(digits)?;
        Ok(self.0.eval(&ctx).map_err(to_py)?.to_sig_string(digits))
    }

    /// Coefficient of Euler's constant, as "p/q".
    fn gamma_coefficient(&self) -> String {
        render_rational(&self.0.gamma_coefficient())
    }

    /// The exact rational value when no transcendental term survives.
    fn as_rational(&self) -> Option<String> {
        self.0.as_rational().map(|r| render_rational(&r))
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __add__(&self, other: &PyClosedForm) -> PyClosedForm {
        PyClosedForm(self.0.add(&other.0))
    }

    fn __eq__(&self, other: &PyClosedForm) -> bool {
        self.0 == other.0
    }

    fn __str__(&self) -> String {
        self.0.render()
    }

    fn __repr__(&self) -> String {
        format!("ClosedForm('{}')", self.0.render())
    }
}

/// A value with a certified absolute error bound.
#[pyclass(name = "Estimate", module = "hypsum", frozen, get_all)]
struct PyEstimate {
    value: String,
    eps: String,
    terms: usize,
}

impl PyEstimate {
    fn new(s: SeriesEstimate, digits: u32) -> Self {
        PyEstimate {
            value: s.value.to_sig_string(digits),
            eps: rational_sci(&s.eps),
            terms: s.terms,
        }
    }
}

#[pymethods]
impl PyEstimate {
    fn __repr__(&self) -> String {
        format!("Estimate(value='{}', eps='{}', terms={})", self.value, self.eps, self.terms)
    }
}

#[pyclass(name = "VerifyReport", module = "hypsum", frozen, get_all)]
struct PyVerifyReport {
    id: String,
    c: String,
    status: String,
    digits: u32,
    closed_form: String,
    closed_value: String,
    series_value: String,
    rhs_value: String,
    diff_closed: String,
    diff_series: String,
    verdict: String,
    meets_expectation: bool,
}

impl From<&VerifyReport> for PyVerifyReport {
    fn from(r: &VerifyReport) -> Self {
        PyVerifyReport {
            id: r.id.clone(),
            c: render_rational(&r.c),
            status: r.status.to_string(),
            digits: r.digits,
            closed_form: r.closed_form.clone(),
            closed_value: r.closed_value.to_sig_string(r.digits),
            series_value: r.series_value.to_sig_string(r.digits),
            rhs_value: r.rhs_value.to_sig_string(r.digits),
            diff_closed: r.abs_diff_closed_rhs.to_sci_string(6),
            diff_series: r.abs_diff_series_rhs.to_sci_string(6),
            verdict: r.verdict.to_string(),
            meets_expectation: r.meets_expectation(),
        }
    }
}

#[pymethods]
impl PyVerifyReport {
    fn __repr__(&self) -> String {
        format!("VerifyReport(id='{}', verdict='{}', diff_closed='{}')", self.id, self.verdict, self.diff_closed)
    }
}

#[pyfunction]
fn psi_murty(p: u64, q: u64) -> PyResult<PyClosedForm> {
    digamma::psi_murty(p, q).map(PyClosedForm).map_err(to_py)
}

#[pyfunction]
fn psi_gauss(p: u64, q: u64) -> PyResult<PyClosedForm> {
    digamma::psi_gauss(p, q).map(PyClosedForm).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (r, route = "murty"))]
fn psi_closed(r: &Bound<'_, PyAny>, route: &str) -> PyResult<PyClosedForm> {
    digamma::psi_closed(&rational_arg(r)?, route_arg(route)?)
        .map(PyClosedForm)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (r, digits = 50, target = None))]
fn psi_series(r: &Bound<'_, PyAny>, digits: u32, target: Option<u32>) -> PyResult<PyEstimate> {
    let ctx = context(digits)?;
    let target = target.unwrap_or_else(|| theorems::series_target(digits));
    let s = digamma::psi_series(&rational_arg(r)?, &ctx, target).map_err(to_py)?;
    Ok(PyEstimate::new(s, digits))
}

#[pyfunction]
#[pyo3(signature = (c, route = "murty"))]
fn closed_3f2(c: &Bound<'_, PyAny>, route: &str) -> PyResult<PyClosedForm> {
    clausen::closed_3f2(&rational_arg(c)?, route_arg(route)?)
        .map(PyClosedForm)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (c, digits = 50, target = None))]
fn series_3f2(c: &Bound<'_, PyAny>, digits: u32, target: Option<u32>) -> PyResult<PyEstimate> {
    let ctx = context(digits)?;
    let target = target.unwrap_or_else(|| theorems::series_target(digits));
    let s = clausen::series_3f2(&rational_arg(c)?, &ctx, target).map_err(to_py)?;
    Ok(PyEstimate::new(s, digits))
}

#[pyfunction]
#[pyo3(signature = (c, digits = 50))]
fn telescoped_3f2(c: &Bound<'_, PyAny>, digits: u32) -> PyResult<PyEstimate> {
    let ctx = context(digits)?;
    let s = clausen::telescoped_3f2(&rational_arg(c)?, &ctx).map_err(to_py)?;
    Ok(PyEstimate::new(s, digits))
}

#[pyfunction]
#[pyo3(signature = (digits = 50))]
fn basel_case(digits: u32) -> PyResult<String> {
    Ok(clausen::basel_case(&context(digits)?).to_sig_string(digits))
}

/// Evaluates an expression such as "12 - 2*pi/sqrt(3) - 6*ln(3)".
#[pyfunction]
#[pyo3(signature = (text, digits = 50))]
fn eval_expr(text: &str, digits: u32) -> PyResult<String> {
    let ctx = context(digits)?;
    let e = parse_expr(text).map_err(to_py)?;
    Ok(e.eval(&ctx).map_err(to_py)?.to_sig_string(digits))
}

#[pyfunction]
fn theorem_ids() -> Vec<String> {
    theorems::load_database().iter().map(|r| r.id.clone()).collect()
}

/// Verifies one record, or all of them when `id` is omitted.
#[pyfunction]
#[pyo3(signature = (id = None, digits = 50, route = "murty"))]
fn verify(py: Python<'_>, id: Option<&str>, digits: u32, route: &str) -> PyResult<Vec<PyVerifyReport>> {
    let ctx = context(digits)?;
    let route = route_arg(route)?;
    let thresholds = Thresholds::default();
    let results = py.detach(|| match id {
        Some(id) => vec![theorems::find(id).and_then(|r| theorems::verify_record(r, &ctx, &thresholds, route))],
        None => theorems::verify_all(&ctx, &thresholds, route),
    });
    results
        .into_iter()
        .map(|r| r.map(|r| PyVerifyReport::from(&r)).map_err(to_py))
        .collect()
}

#[pymodule]
pub fn hypsum(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("HypsumError", m.py().get_type::<HypsumError>())?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyClosedForm>()?;
    m.add_class::<PyEstimate>()?;
    m.add_class::<PyVerifyReport>()?;
    m.add_function(wrap_pyfunction!(psi_murty, m)?)?;
    m.add_function(wrap_pyfunction!(psi_gauss, m)?)?;
    m.add_function(wrap_pyfunction!(psi_closed, m)?)?;
    m.add_function(wrap_pyfunction!(psi_series, m)?)?;
    m.add_function(wrap_pyfunction!(closed_3f2, m)?)?;
    m.add_function(wrap_pyfunction!(series_3f2, m)?)?;
    m.add_function(wrap_pyfunction!(telescoped_3f2, m)?)?;
    m.add_function(wrap_pyfunction!(basel_case, m)?)?;
    m.add_function(wrap_pyfunction!(eval_expr, m)?)?;
    m.add_function(wrap_pyfunction!(theorem_ids, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
