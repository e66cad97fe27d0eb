//! Python bindings: `import pymcurve`.
//!
//! Curves come back as dicts of equal-length lists so they drop straight
//! into numpy or pandas.

use mcurve::analysis::{self, Direction};
use mcurve::hermite::{self, HermiteProblem};
use mcurve::qi3d::{QiCurveSpec, QuaternionCurve, UnitQuaternion};
use mcurve::quadrature::DEFAULT_TOL;
use mcurve::{Pose, SampledCurve};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(pymcurve, McurveError, PyValueError);

fn err(e: mcurve::Error) -> PyErr {
    McurveError::new_err(e.to_string())
}

fn curve_dict<'py>(py: Python<'py>, c: &SampledCurve) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("s", c.samples.iter().map(|p| p.s).collect::<Vec<_>>())?;
    d.set_item("x", c.samples.iter().map(|p| p.x).collect::<Vec<_>>())?;
    d.set_item("y", c.samples.iter().map(|p| p.y).collect::<Vec<_>>())?;
    d.set_item("theta", c.samples.iter().map(|p| p.theta).collect::<Vec<_>>())?;
    d.set_item("kappa", c.samples.iter().map(|p| p.kappa).collect::<Vec<_>>())?;
    Ok(d)
}

fn direction_name(d: Direction) -> &'static str {
    match d {
        Direction::Decreasing => "decreasing",
        Direction::Increasing => "increasing",
        Direction::Constant => "constant",
        Direction::NonMonotone => "non_monotone",
    }
}

/// Member of the family `kappa(s)` with shape `alpha` and rate `lambda`.
#[pyclass(name = "NaturalEquation", frozen)]
struct PyNaturalEquation(mcurve::NaturalEquation);

#[pymethods]
impl PyNaturalEquation {
    #[new]
    #[pyo3(signature = (alpha, lambda_))]
    fn new(alpha: f64, lambda_: f64) -> PyResult<Self> {
        mcurve::NaturalEquation::new(alpha, lambda_).map(Self).map_err(err)
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha()
    }

    #[getter]
    fn lambda_(&self) -> f64 {
        self.0.lambda()
    }

    /// Arc length where the curvature blows up or vanishes; `inf` if none.
    #[getter]
    fn s_max_domain(&self) -> f64 {
        self.0.s_max_domain()
    }

    fn curvature(&self, s: f64) -> PyResult<f64> {
        self.0.curvature(s).map_err(err)
    }

    fn turning_angle(&self, s: f64) -> PyResult<f64> {
        self.0.turning_angle(s).map_err(err)
    }

    #[pyo3(signature = (s, tol = DEFAULT_TOL))]
    fn point(&self, s: f64, tol: f64) -> PyResult<(f64, f64)> {
        let p = self.0.evaluate_point(s, tol).map_err(err)?;
        Ok((p[0], p[1]))
    }

    /// `n` samples on `[0, s_end]`, starting at the origin along +x.
    fn sample<'py>(&self, py: Python<'py>, s_end: f64, n: usize) -> PyResult<Bound<'py, PyDict>> {
        let c = self.0.sample(s_end, n, Pose::new(0.0, 0.0, 0.0)).map_err(err)?;
        curve_dict(py, &c)
    }

    fn __repr__(&self) -> String {
        format!("NaturalEquation(alpha={}, lambda_={})", self.0.alpha(), self.0.lambda())
    }
}

/// euler, nielsen, log_spiral, involute or quasi_circle.
#[pyfunction]
#[pyo3(signature = (name, lambda_))]
fn named_curve(name: &str, lambda_: f64) -> PyResult<PyNaturalEquation> {
    mcurve::named_curve(name, lambda_).map(PyNaturalEquation).map_err(err)
}

/// Line fit of the logarithmic curvature graph of sampled `(s, kappa)`.
#[pyfunction]
fn lcg<'py>(py: Python<'py>, s: Vec<f64>, kappa: Vec<f64>) -> PyResult<Bound<'py, PyDict>> {
    let r = analysis::lcg_from_samples(&s, &kappa).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("slope", r.slope)?;
    d.set_item("intercept", r.intercept)?;
    d.set_item("rms_residual", r.rms_residual)?;
    d.set_item("dropped", r.dropped)?;
    d.set_item("points", r.points)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (s, kappa, tol = None))]
fn check_monotone<'py>(py: Python<'py>, s: Vec<f64>, kappa: Vec<f64>, tol: Option<f64>) -> PyResult<Bound<'py, PyDict>> {
    let r = analysis::check_monotone(&s, &kappa, tol).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("is_monotone", r.is_monotone)?;
    d.set_item("direction", direction_name(r.direction))?;
    d.set_item("violations", r.violations)?;
    d.set_item("tolerance", r.tolerance)?;
    Ok(d)
}

/// Chord angles reachable for turning `delta_theta` on the default grid.
#[pyfunction]
fn drawable_region<'py>(py: Python<'py>, alpha: f64, delta_theta: f64) -> PyResult<Bound<'py, PyDict>> {
    let grid = hermite::default_lambda_grid(alpha, delta_theta);
    let r = hermite::drawable_region(alpha, delta_theta, &grid).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("psi_min", r.psi_min)?;
    d.set_item("psi_max", r.psi_max)?;
    d.set_item("samples", r.boundary_samples)?;
    Ok(d)
}

/// Segment from `p_start` to `p_end` with the given tangent angles.
#[pyfunction]
#[pyo3(signature = (p_start, p_end, start_angle, end_angle, alpha, tol = hermite::DEFAULT_FIT_TOL, n = 200))]
fn fit_g1<'py>(
    py: Python<'py>,
    p_start: (f64, f64),
    p_end: (f64, f64),
    start_angle: f64,
    end_angle: f64,
    alpha: f64,
    tol: f64,
    n: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let p = HermiteProblem::from_angles([p_start.0, p_start.1], [p_end.0, p_end.1], start_angle, end_angle, alpha);
    let seg = hermite::fit_g1(&p, tol).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("lambda_", seg.lambda())?;
    d.set_item("world_lambda", seg.world_lambda())?;
    d.set_item("length", seg.world_length())?;
    d.set_item("residual", seg.residual)?;
    d.set_item("reversed", seg.reversed)?;
    d.set_item("curve", curve_dict(py, &seg.sample(n).map_err(err)?)?)?;
    Ok(d)
}

/// Samples `(s, point, tangent)` of a quaternion integral curve whose
/// orientation follows the Bezier curve through `controls` as `(w, x, y, z)`.
#[pyfunction]
#[pyo3(signature = (controls, p0, v0, s_total, n, tol = DEFAULT_TOL))]
fn qi_sample(
    controls: Vec<(f64, f64, f64, f64)>,
    p0: [f64; 3],
    v0: [f64; 3],
    s_total: f64,
    n: usize,
    tol: f64,
) -> PyResult<Vec<(f64, [f64; 3], [f64; 3])>> {
    let q = controls
        .into_iter()
        .map(|(w, x, y, z)| UnitQuaternion::new(w, x, y, z))
        .collect::<mcurve::Result<Vec<_>>>()
        .map_err(err)?;
    let spec = QiCurveSpec::new(p0, v0, QuaternionCurve::new(q).map_err(err)?, s_total).map_err(err)?;
    let samples = spec.sample(n, tol).map_err(err)?;
    Ok(samples.into_iter().map(|s| (s.s, s.point, s.tangent)).collect())
}

#[pymodule]
fn pymcurve(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("McurveError", m.py().get_type::<McurveError>())?;
    m.add_class::<PyNaturalEquation>()?;
    m.add_function(wrap_pyfunction!(named_curve, m)?)?;
    m.add_function(wrap_pyfunction!(lcg, m)?)?;
    m.add_function(wrap_pyfunction!(check_monotone, m)?)?;
    m.add_function(wrap_pyfunction!(drawable_region, m)?)?;
    m.add_function(wrap_pyfunction!(fit_g1, m)?)?;
    m.add_function(wrap_pyfunction!(qi_sample, m)?)?;
    Ok(())
}
