//! Python bindings: `GroupPoint`, `Geodesic` and the synthesis entry points.
//! Structured results cross the boundary as dicts decoded from JSON.

use pathgroup::geodesic::exp_point;
use pathgroup::optimality::{conjugate_time, cut_time, cut_time_at_point, in_cut_locus};
use pathgroup::symmetry::invariants_of;
use pathgroup::verify::{run_all, VerifyConfig};
use pathgroup::{group, synthesis, GeodesicParams, DEFAULT_TOL};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

create_exception!(pathgroup, PathgroupError, PyException);

fn err(e: pathgroup::Error) -> PyErr {
    PathgroupError::new_err(format!("{}: {e}", e.kind()))
}

fn to_dict<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> PyResult<T> {
    serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// A point `(x | ℓ | y)` of the group.
#[pyclass(name = "GroupPoint", module = "pathgroup", frozen)]
struct PyGroupPoint(group::GroupPoint);

#[pymethods]
impl PyGroupPoint {
    #[new]
    fn new(x: f64, l: Vec<f64>, y: Vec<f64>) -> PyResult<Self> {
        group::GroupPoint::new(x, l, y).map(Self).map_err(err)
    }

    #[staticmethod]
    fn identity(n: usize) -> Self {
        Self(group::GroupPoint::identity(n))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        from_json(text).map(Self)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("serializable")
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn x(&self) -> f64 {
        self.0.x
    }

    #[getter]
    fn l(&self) -> Vec<f64> {
        self.0.l.clone()
    }

    #[getter]
    fn y(&self) -> Vec<f64> {
        self.0.y.clone()
    }

    fn __mul__(&self, other: &PyGroupPoint) -> PyResult<Self> {
        group::multiply(&self.0, &other.0).map(Self).map_err(err)
    }

    fn inverse(&self) -> Self {
        Self(group::inverse(&self.0))
    }

    fn max_abs_diff(&self, other: &PyGroupPoint) -> f64 {
        self.0.max_abs_diff(&other.0)
    }

    /// `{"x", "l2", "ldoty", "lwedge", "y2", "phi"}`
    fn invariants<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_dict(py, &invariants_of(&self.0))
    }

    #[pyo3(signature = (tol = DEFAULT_TOL))]
    fn in_cut_locus(&self, tol: f64) -> bool {
        in_cut_locus(&self.0, tol)
    }

    /// Time at which the minimizers to this point stop being optimal.
    #[pyo3(signature = (tol = DEFAULT_TOL))]
    fn cut_time(&self, tol: f64) -> PyResult<f64> {
        cut_time_at_point(&self.0, tol).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "GroupPoint(x={:?}, l={:?}, y={:?})",
            self.0.x, self.0.l, self.0.y
        )
    }
}

/// A unit-speed geodesic from the identity: a line or a helix.
#[pyclass(name = "Geodesic", module = "pathgroup", frozen)]
struct PyGeodesic(GeodesicParams);

#[pymethods]
impl PyGeodesic {
    #[staticmethod]
    fn line(c0: f64, c: Vec<f64>) -> PyResult<Self> {
        GeodesicParams::line(c0, c).map(Self).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (alpha, rho, sigma, k, kperp = None))]
    fn helix(
        alpha: f64,
        rho: f64,
        sigma: f64,
        k: Vec<f64>,
        kperp: Option<Vec<f64>>,
    ) -> PyResult<Self> {
        GeodesicParams::helix(alpha, rho, sigma, k, kperp)
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        from_json(text).map(Self)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("serializable")
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn kind(&self) -> &'static str {
        match self.0 {
            GeodesicParams::Line { .. } => "line",
            GeodesicParams::Helix(_) => "helix",
        }
    }

    fn __call__(&self, t: f64) -> PyGroupPoint {
        PyGroupPoint(exp_point(&self.0, t))
    }

    fn sample(&self, times: Vec<f64>) -> Vec<PyGroupPoint> {
        times
            .iter()
            .map(|&t| PyGroupPoint(exp_point(&self.0, t)))
            .collect()
    }

    fn cut_time(&self) -> f64 {
        cut_time(&self.0)
    }

    fn conjugate_time(&self) -> PyResult<f64> {
        conjugate_time(&self.0).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Geodesic({})", self.to_json())
    }
}

/// `q0⁻¹ · q1`
#[pyfunction]
fn reduce_to_origin(q0: &PyGroupPoint, q1: &PyGroupPoint) -> PyResult<PyGroupPoint> {
    group::reduce_to_origin(&q0.0, &q1.0)
        .map(PyGroupPoint)
        .map_err(err)
}

/// Full synthesis result as a dict.
#[pyfunction]
#[pyo3(signature = (target, tol = DEFAULT_TOL))]
fn synthesize<'py>(
    py: Python<'py>,
    target: &PyGroupPoint,
    tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let r = synthesis::synthesize(&target.0, tol).map_err(err)?;
    to_dict(py, &r)
}

/// `[(Geodesic, time), ...]` minimizing from the identity to `target`.
#[pyfunction]
#[pyo3(signature = (target, tol = DEFAULT_TOL))]
fn minimizers(target: &PyGroupPoint, tol: f64) -> PyResult<Vec<(PyGeodesic, f64)>> {
    let r = synthesis::synthesize(&target.0, tol).map_err(err)?;
    Ok(r.solutions
        .into_iter()
        .map(|s| (PyGeodesic(s.params), s.time))
        .collect())
}

#[pyfunction]
#[pyo3(signature = (q0, q1, tol = DEFAULT_TOL))]
fn distance(q0: &PyGroupPoint, q1: &PyGroupPoint, tol: f64) -> PyResult<f64> {
    synthesis::distance(&q0.0, &q1.0, tol).map_err(err)
}

/// Acceptance reports as a list of dicts.
#[pyfunction]
#[pyo3(signature = (seed = 42, size = 1.0))]
fn verify<'py>(py: Python<'py>, seed: u64, size: f64) -> PyResult<Bound<'py, PyAny>> {
    if !(size > 0.0 && size.is_finite()) {
        return Err(PyValueError::new_err("size must be positive"));
    }
    to_dict(py, &run_all(&VerifyConfig { seed, size }))
}

#[pymodule(name = "pathgroup")]
fn pathgroup_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("PathgroupError", m.py().get_type::<PathgroupError>())?;
    m.add("DEFAULT_TOL", DEFAULT_TOL)?;
    m.add_class::<PyGroupPoint>()?;
    m.add_class::<PyGeodesic>()?;
    m.add_function(wrap_pyfunction!(reduce_to_origin, m)?)?;
    m.add_function(wrap_pyfunction!(synthesize, m)?)?;
    m.add_function(wrap_pyfunction!(minimizers, m)?)?;
    m.add_function(wrap_pyfunction!(distance, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
