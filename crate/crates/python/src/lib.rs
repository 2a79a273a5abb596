//! Python bindings. Matrices cross the boundary as nested `[[a11, a12], [a21, a22]]`
//! sequences; structured results come back as plain dicts.

use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use pythonize::pythonize;
use serde::Serialize;

use reactlin_core::amplification::{self as amp, ComplexPolicy, NumericOptions};
use reactlin_core::dynamics::{self, NonautConfig, Trajectory};
use reactlin_core::forms::{self, FormKind};
use reactlin_core::{rt, spectra, synthesis, Error, Mat2};

type Rows = [[f64; 2]; 2];

fn err(e: Error) -> PyErr {
    match e {
        Error::Numeric(_) => PyArithmeticError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn mat(rows: Rows) -> PyResult<Mat2> {
    let m = Mat2::from_rows(rows);
    m.ensure_finite().map_err(err)?;
    Ok(m)
}

fn to_py<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    pythonize(py, v).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Radial/tangential parameters `(m_R, m_T, p, theta_R)` of a matrix.
#[pyclass(name = "RTParams", frozen, from_py_object, module = "reactlin")]
#[derive(Clone, Copy)]
struct PyRT(rt::RTParams);

#[pymethods]
impl PyRT {
    #[new]
    #[pyo3(signature = (m_r, m_t, p, theta_r=None))]
    fn new(m_r: f64, m_t: f64, p: f64, theta_r: Option<f64>) -> PyResult<Self> {
        rt::RTParams::new(m_r, m_t, p, theta_r).map(PyRT).map_err(err)
    }

    #[getter]
    fn m_r(&self) -> f64 {
        self.0.m_r()
    }
    #[getter]
    fn m_t(&self) -> f64 {
        self.0.m_t()
    }
    #[getter]
    fn p(&self) -> f64 {
        self.0.p()
    }
    #[getter]
    fn theta_r(&self) -> Option<f64> {
        self.0.theta_r().map(|t| t.value())
    }
    #[getter]
    fn theta_t(&self) -> Option<f64> {
        self.0.theta_t().map(|t| t.value())
    }
    #[getter]
    fn rho1(&self) -> f64 {
        self.0.rho1()
    }
    #[getter]
    fn rho2(&self) -> f64 {
        self.0.rho2()
    }
    #[getter]
    fn tau1(&self) -> f64 {
        self.0.tau1()
    }
    #[getter]
    fn tau2(&self) -> f64 {
        self.0.tau2()
    }

    fn radial(&self, theta: f64) -> f64 {
        self.0.radial(theta)
    }

    fn tangential(&self, theta: f64) -> f64 {
        self.0.tangential(theta)
    }

    fn matrix(&self) -> Rows {
        rt::reconstruct(&self.0).to_rows()
    }

    fn __repr__(&self) -> String {
        format!(
            "RTParams(m_r={}, m_t={}, p={}, theta_r={:?})",
            self.0.m_r(),
            self.0.m_t(),
            self.0.p(),
            self.theta_r()
        )
    }
}

#[pyfunction]
fn decompose(a: Rows) -> PyResult<PyRT> {
    rt::decompose(&mat(a)?).map(PyRT).map_err(err)
}

#[pyfunction]
fn reconstruct(params: &PyRT) -> Rows {
    params.matrix()
}

#[pyfunction]
fn rotate_conjugate(a: Rows, gamma: f64) -> PyResult<Rows> {
    Ok(rt::rotate_conjugate(&mat(a)?, gamma).to_rows())
}

#[pyfunction]
fn eigen_structure(py: Python<'_>, a: Rows) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &spectra::eigen_structure(&rt::decompose(&mat(a)?).map_err(err)?))
}

#[pyfunction]
fn ortho_structure(py: Python<'_>, a: Rows) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &spectra::ortho_structure(&rt::decompose(&mat(a)?).map_err(err)?))
}

#[pyfunction]
fn transient_summary(py: Python<'_>, a: Rows) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &spectra::transient_summary(&rt::decompose(&mat(a)?).map_err(err)?))
}

#[pyfunction]
fn angular_phase_line(py: Python<'_>, a: Rows) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &spectra::angular_phase_line(&rt::decompose(&mat(a)?).map_err(err)?))
}

fn form_kind(name: &str) -> PyResult<FormKind> {
    FormKind::ALL
        .into_iter()
        .find(|k| k.key() == name)
        .ok_or_else(|| PyValueError::new_err(format!("unknown form {name:?}; expected rc, tc, r0 or t0")))
}

/// `(matrix, gamma)` with `matrix = rotation(-gamma) A rotation(gamma)`.
#[pyfunction]
fn standard_form(a: Rows, kind: &str) -> PyResult<(Rows, f64)> {
    let r = forms::to_form(&mat(a)?, form_kind(kind)?).map_err(err)?;
    Ok((r.matrix.to_rows(), r.gamma))
}

#[pyfunction]
fn verify_form(a: Rows, kind: &str) -> PyResult<bool> {
    Ok(forms::verify_form(&mat(a)?, form_kind(kind)?))
}

#[pyfunction]
fn from_deltas(delta_r: f64, delta_t: f64, rho: f64) -> PyResult<Rows> {
    synthesis::from_deltas(delta_r, delta_t, rho).map(Mat2::to_rows).map_err(err)
}

#[pyfunction]
fn attractor_with_eigenvalues(lambda1: f64, lambda2: f64, rho: f64) -> PyResult<Rows> {
    synthesis::attractor_with_eigenvalues(lambda1, lambda2, rho)
        .map(Mat2::to_rows)
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (theta1, theta2, rho, delta_r=None))]
fn attractor_with_eigenvectors(theta1: f64, theta2: f64, rho: f64, delta_r: Option<f64>) -> PyResult<Rows> {
    synthesis::attractor_with_eigenvectors(theta1, theta2, rho, delta_r)
        .map(Mat2::to_rows)
        .map_err(err)
}

/// Maximal amplification of a reactive attractor. `policy` is `"numeric"`
/// (default), `"strict"` or `"experimental"`.
#[pyfunction]
#[pyo3(signature = (a, policy="numeric"))]
fn rho_max<'py>(py: Python<'py>, a: Rows, policy: &str) -> PyResult<Bound<'py, PyAny>> {
    let policy = match policy {
        "numeric" => ComplexPolicy::Numeric,
        "strict" => ComplexPolicy::Strict,
        "experimental" => ComplexPolicy::Experimental,
        other => return Err(PyValueError::new_err(format!("unknown policy {other:?}"))),
    };
    to_py(py, &amp::rho_max_closed(&mat(a)?, policy).map_err(err)?)
}

#[pyfunction]
fn rho_max_numeric(py: Python<'_>, a: Rows) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &amp::rho_max_numeric(&mat(a)?, &NumericOptions::default()).map_err(err)?)
}

/// `(ortho, eigen)` upper bounds; `eigen` is `None` without real eigenvalues.
#[pyfunction]
fn rho_max_bounds(a: Rows) -> PyResult<(f64, Option<f64>)> {
    let a = mat(a)?;
    Ok((
        amp::rho_max_bound_ortho(&a).map_err(err)?,
        amp::rho_max_bound_eigen(&a).ok(),
    ))
}

#[pyfunction]
fn matrix_exponential(a: Rows, t: f64) -> PyResult<Rows> {
    Ok(dynamics::matrix_exponential(&mat(a)?, t).to_rows())
}

fn columns<'py>(py: Python<'py>, tr: &Trajectory) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    let s = &tr.samples;
    d.set_item("t", s.iter().map(|x| x.t).collect::<Vec<_>>())?;
    d.set_item("x1", s.iter().map(|x| x.x1).collect::<Vec<_>>())?;
    d.set_item("x2", s.iter().map(|x| x.x2).collect::<Vec<_>>())?;
    d.set_item("r", s.iter().map(|x| x.r()).collect::<Vec<_>>())?;
    d.set_item("theta", s.iter().map(|x| x.theta).collect::<Vec<_>>())?;
    Ok(d)
}

/// Trajectory of `X' = A X` as a dict of columns `t, x1, x2, r, theta`
/// (`theta` unwrapped). With `k`, the coefficients rotate at rate `k`.
#[pyfunction]
#[pyo3(signature = (a, x0, t_end, step=1e-3, k=None, polar=false))]
fn integrate(
    py: Python<'_>,
    a: Rows,
    x0: [f64; 2],
    t_end: f64,
    step: f64,
    k: Option<f64>,
    polar: bool,
) -> PyResult<Bound<'_, PyDict>> {
    let a = mat(a)?;
    let tr = match (k, polar) {
        (Some(_), true) => return Err(PyValueError::new_err("polar and k cannot be combined")),
        (Some(k), false) => {
            dynamics::integrate_nonaut(&NonautConfig::new(a, k).map_err(err)?, x0, step, t_end)
        }
        (None, true) => dynamics::integrate_polar(
            &rt::decompose(&a).map_err(err)?,
            x0[0].hypot(x0[1]),
            x0[1].atan2(x0[0]),
            step,
            t_end,
        ),
        (None, false) => dynamics::integrate_linear(&a, x0, step, t_end),
    }
    .map_err(err)?;
    columns(py, &tr)
}

/// `(lo, hi)`: rotation rates for which the rotating system is repelling.
#[pyfunction]
fn repulsion_window(a: Rows) -> PyResult<(f64, f64)> {
    let w = dynamics::repulsion_window(&mat(a)?).map_err(err)?;
    Ok((w.lo, w.hi))
}

#[pyfunction]
#[pyo3(signature = (a, ks, step=1e-3, t_end=50.0))]
fn sweep_k(py: Python<'_>, a: Rows, ks: Vec<f64>, step: f64, t_end: f64) -> PyResult<Bound<'_, PyAny>> {
    let a = mat(a)?;
    let rows = py
        .detach(|| dynamics::sweep_k(&a, &ks, [1.0, 0.0], step, t_end))
        .map_err(err)?;
    to_py(py, &rows)
}

#[pymodule]
fn reactlin(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRT>()?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(rotate_conjugate, m)?)?;
    m.add_function(wrap_pyfunction!(eigen_structure, m)?)?;
    m.add_function(wrap_pyfunction!(ortho_structure, m)?)?;
    m.add_function(wrap_pyfunction!(transient_summary, m)?)?;
    m.add_function(wrap_pyfunction!(angular_phase_line, m)?)?;
    m.add_function(wrap_pyfunction!(standard_form, m)?)?;
    m.add_function(wrap_pyfunction!(verify_form, m)?)?;
    m.add_function(wrap_pyfunction!(from_deltas, m)?)?;
    m.add_function(wrap_pyfunction!(attractor_with_eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(attractor_with_eigenvectors, m)?)?;
    m.add_function(wrap_pyfunction!(rho_max, m)?)?;
    m.add_function(wrap_pyfunction!(rho_max_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(rho_max_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(matrix_exponential, m)?)?;
    m.add_function(wrap_pyfunction!(integrate, m)?)?;
    m.add_function(wrap_pyfunction!(repulsion_window, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_k, m)?)?;
    Ok(())
}
