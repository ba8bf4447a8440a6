//! Python module `itqsl`.

use itqsl::models::{self, GroverParams, TwoLevelParams};
use itqsl::qstate::HERMITICITY_TOL;
use itqsl::{Complex64, Error, TimeGrid, Tolerances};
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

fn py_err(e: Error) -> PyErr {
    if e.is_numeric() {
        PyArithmeticError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

trait PyResultExt<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> PyResultExt<T> for itqsl::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

/// A pure state as a list of complex amplitudes.
#[pyclass(name = "StateVector", module = "itqsl", frozen)]
#[derive(Clone)]
pub struct PyStateVector {
    inner: itqsl::StateVector,
}

#[pymethods]
impl PyStateVector {
    #[new]
    fn new(amplitudes: Vec<Complex64>) -> PyResult<Self> {
        Ok(Self {
            inner: itqsl::StateVector::new(amplitudes).py()?,
        })
    }

    #[getter]
    fn amplitudes(&self) -> Vec<Complex64> {
        self.inner.amplitudes().to_vec()
    }

    #[getter]
    fn norm(&self) -> f64 {
        self.inner.norm()
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    fn normalize(&self) -> Self {
        Self {
            inner: self.inner.clone().normalize(),
        }
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    fn inner(&self, other: &PyStateVector) -> PyResult<Complex64> {
        self.inner.inner(&other.inner).py()
    }

    fn __len__(&self) -> usize {
        self.inner.dimension()
    }

    fn __repr__(&self) -> String {
        format!("StateVector(dimension={}, norm={})", self.inner.dimension(), self.inner.norm())
    }
}

/// A Hermitian matrix, validated and symmetrized on construction.
#[pyclass(name = "HermitianOperator", module = "itqsl", frozen)]
#[derive(Clone)]
pub struct PyHermitianOperator {
    inner: itqsl::HermitianOperator,
}

#[pymethods]
impl PyHermitianOperator {
    #[new]
    #[pyo3(signature = (rows, tol = HERMITICITY_TOL))]
    fn new(rows: Vec<Vec<Complex64>>, tol: f64) -> PyResult<Self> {
        Ok(Self {
            inner: itqsl::HermitianOperator::from_rows(&rows, tol).py()?,
        })
    }

    #[staticmethod]
    fn diagonal(values: Vec<f64>) -> PyResult<Self> {
        Ok(Self {
            inner: itqsl::HermitianOperator::diagonal(&values).py()?,
        })
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    fn to_rows(&self) -> Vec<Vec<Complex64>> {
        let m = self.inner.matrix();
        (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
            .collect()
    }

    fn expectation(&self, state: &PyStateVector) -> PyResult<f64> {
        self.inner.expectation(&state.inner).py()
    }

    fn dispersion(&self, state: &PyStateVector) -> PyResult<f64> {
        self.inner.dispersion(&state.inner).py()
    }

    /// `(eigenvalues ascending, eigenvectors)`.
    fn eig(&self) -> PyResult<(Vec<f64>, Vec<PyStateVector>)> {
        let s = self.inner.eig().py()?;
        let vectors = s
            .eigenvectors
            .into_iter()
            .map(|inner| PyStateVector { inner })
            .collect();
        Ok((s.eigenvalues, vectors))
    }

    fn __repr__(&self) -> String {
        format!("HermitianOperator(dimension={})", self.inner.dimension())
    }
}

/// Sampled normalized trajectory `φ(t_k)`.
#[pyclass(name = "Trajectory", module = "itqsl", frozen)]
pub struct PyTrajectory {
    inner: itqsl::Trajectory,
}

#[pymethods]
impl PyTrajectory {
    #[getter]
    fn times(&self) -> Vec<f64> {
        self.inner.times()
    }

    #[getter]
    fn thetas(&self) -> Vec<f64> {
        self.inner.thetas()
    }

    #[getter]
    fn delta_hs(&self) -> Vec<f64> {
        self.inner.delta_hs()
    }

    #[getter]
    fn log_norms(&self) -> Vec<f64> {
        self.inner.log_norms()
    }

    #[getter]
    fn horizon(&self) -> f64 {
        self.inner.horizon()
    }

    fn state(&self, k: usize) -> PyResult<PyStateVector> {
        self.inner
            .samples
            .get(k)
            .map(|s| PyStateVector { inner: s.phi.clone() })
            .ok_or_else(|| PyValueError::new_err(format!("sample {k} out of range")))
    }

    fn __len__(&self) -> usize {
        self.inner.samples.len()
    }

    fn __repr__(&self) -> String {
        format!("Trajectory(samples={}, horizon={})", self.inner.samples.len(), self.inner.horizon())
    }
}

#[pyclass(name = "QslReport", module = "itqsl", frozen, get_all)]
pub struct PyQslReport {
    theta_t: f64,
    path_length: f64,
    avg_speed: f64,
    bound_time: f64,
    actual_time: f64,
    slack: f64,
    saturated: bool,
}

#[pymethods]
impl PyQslReport {
    fn __repr__(&self) -> String {
        format!(
            "QslReport(theta_t={}, path_length={}, slack={}, saturated={})",
            self.theta_t, self.path_length, self.slack, self.saturated
        )
    }
}

#[pyclass(name = "SaturationCertificate", module = "itqsl", frozen, get_all)]
pub struct PyCertificate {
    times: Vec<f64>,
    residuals: Vec<f64>,
    /// `None` where the sample was skipped.
    lambdas: Vec<Option<f64>>,
    max_residual: f64,
    min_lambda: Option<f64>,
    fraction_skipped: f64,
}

#[pymethods]
impl PyCertificate {
    #[pyo3(signature = (tol = 1e-8))]
    fn is_saturating(&self, tol: f64) -> bool {
        self.max_residual <= tol && self.lambdas.iter().flatten().all(|&l| l >= -tol)
    }
}

/// Evolves `psi0` under `h` on `num_steps` equal steps up to `horizon`.
/// `method` is `"exact"` (spectral) or `"rk4"`.
#[pyfunction]
#[pyo3(signature = (h, psi0, horizon, num_steps = 1000, method = "exact"))]
fn propagate(
    h: &PyHermitianOperator,
    psi0: &PyStateVector,
    horizon: f64,
    num_steps: usize,
    method: &str,
) -> PyResult<PyTrajectory> {
    let grid = TimeGrid::new(horizon, num_steps).py()?;
    let inner = match method {
        "exact" => itqsl::propagate_exact(&h.inner, &psi0.inner, grid),
        "rk4" => itqsl::propagate_rk4(&h.inner, &psi0.inner, grid),
        other => return Err(PyValueError::new_err(format!("unknown method `{other}`"))),
    }
    .py()?;
    Ok(PyTrajectory { inner })
}

#[pyfunction]
#[pyo3(signature = (trajectory, saturation = 1e-6, quadrature = 1e-8))]
fn qsl_report(trajectory: &PyTrajectory, saturation: f64, quadrature: f64) -> PyResult<PyQslReport> {
    let tol = Tolerances {
        saturation,
        quadrature,
        ..Tolerances::default()
    };
    let r = itqsl::qsl_report_with(&trajectory.inner, &tol).py()?;
    Ok(PyQslReport {
        theta_t: r.theta_t,
        path_length: r.path_length,
        avg_speed: r.avg_speed,
        bound_time: r.bound_time,
        actual_time: r.actual_time,
        slack: r.slack,
        saturated: r.saturated,
    })
}

#[pyfunction]
#[pyo3(signature = (trajectory, h, angle_floor = 1e-6))]
fn saturation_certificate(
    trajectory: &PyTrajectory,
    h: &PyHermitianOperator,
    angle_floor: f64,
) -> PyResult<PyCertificate> {
    let c = itqsl::saturation_certificate_with(&trajectory.inner, &h.inner, angle_floor).py()?;
    Ok(PyCertificate {
        times: c.samples.iter().map(|s| s.t).collect(),
        residuals: c.samples.iter().map(|s| s.residual).collect(),
        lambdas: c.samples.iter().map(|s| s.lambda).collect(),
        max_residual: c.max_residual(),
        min_lambda: c.min_lambda(),
        fraction_skipped: c.fraction_skipped(),
    })
}

/// `(times, |dΘ/dt| margins below ΔH, tolerance, holds)`.
#[pyfunction]
fn rate_check(trajectory: &PyTrajectory) -> PyResult<(Vec<f64>, Vec<f64>, f64, bool)> {
    let r = itqsl::rate_check(&trajectory.inner).py()?;
    Ok((
        r.samples.iter().map(|s| s.t).collect(),
        r.samples.iter().map(|s| s.margin).collect(),
        r.tolerance,
        r.holds(),
    ))
}

#[pyfunction]
fn angle(psi0: &PyStateVector, phi: &PyStateVector) -> PyResult<f64> {
    itqsl::angle(&psi0.inner, &phi.inner).py()
}

/// `|⟨target|φ(t_k)⟩|²` per sample.
#[pyfunction]
fn fidelity(trajectory: &PyTrajectory, target: &PyStateVector) -> PyResult<Vec<f64>> {
    Ok(itqsl::fidelity_to(&trajectory.inner, &target.inner)
        .py()?
        .into_iter()
        .map(|(_, f)| f)
        .collect())
}

/// `(H, psi0)` for `H = diag(E, 0)` and `cos θ|0⟩ + sin θ|1⟩`.
#[pyfunction]
fn two_level(theta0: f64, energy: f64) -> PyResult<(PyHermitianOperator, PyStateVector)> {
    let p = TwoLevelParams::new(theta0, energy, 1.0).py()?;
    let (h, psi0) = models::two_level_hamiltonian(&p).py()?;
    Ok((PyHermitianOperator { inner: h }, PyStateVector { inner: psi0 }))
}

#[pyfunction]
fn two_level_theta(theta0: f64, energy: f64, t: f64) -> PyResult<f64> {
    let p = TwoLevelParams::new(theta0, energy, t.max(f64::MIN_POSITIVE)).py()?;
    Ok(models::two_level_theta(&p, t))
}

#[pyfunction]
fn two_level_dispersion_integral(theta0: f64, energy: f64, horizon: f64) -> PyResult<f64> {
    let p = TwoLevelParams::new(theta0, energy, horizon).py()?;
    Ok(models::two_level_dispersion_integral(&p))
}

/// `(H, psi0, marked)`; reduced to two levels unless `embed`.
#[pyfunction]
#[pyo3(signature = (dimension, e_w, e_perp, embed = false))]
fn grover(
    dimension: usize,
    e_w: f64,
    e_perp: f64,
    embed: bool,
) -> PyResult<(PyHermitianOperator, PyStateVector, PyStateVector)> {
    let p = GroverParams::new(dimension, e_w, e_perp, 1.0, 0.5).py()?;
    let m = models::grover_model(&p, embed).py()?;
    Ok((
        PyHermitianOperator { inner: m.hamiltonian },
        PyStateVector { inner: m.psi0 },
        PyStateVector { inner: m.marked },
    ))
}

#[pyfunction]
#[pyo3(signature = (dimension, e_w, e_perp, epsilon, large_n = false))]
fn grover_runtime(dimension: usize, e_w: f64, e_perp: f64, epsilon: f64, large_n: bool) -> PyResult<f64> {
    let p = GroverParams::new(dimension, e_w, e_perp, 1.0, epsilon).py()?;
    if large_n {
        models::grover_runtime_large_n(&p).py()
    } else {
        models::grover_runtime(&p).py()
    }
}

/// First `t ≤ horizon` with `tan θ(t) = ε`, by bisection; `None` if never.
#[pyfunction]
#[pyo3(signature = (dimension, e_w, e_perp, epsilon, horizon, embed = false))]
fn grover_crossing_time(
    dimension: usize,
    e_w: f64,
    e_perp: f64,
    epsilon: f64,
    horizon: f64,
    embed: bool,
) -> PyResult<Option<f64>> {
    let p = GroverParams::new(dimension, e_w, e_perp, horizon, epsilon).py()?;
    models::grover_crossing_time(&p, embed).py()
}

#[pymodule]
#[pyo3(name = "itqsl")]
fn itqsl_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyStateVector>()?;
    m.add_class::<PyHermitianOperator>()?;
    m.add_class::<PyTrajectory>()?;
    m.add_class::<PyQslReport>()?;
    m.add_class::<PyCertificate>()?;
    m.add_function(wrap_pyfunction!(propagate, m)?)?;
    m.add_function(wrap_pyfunction!(qsl_report, m)?)?;
    m.add_function(wrap_pyfunction!(saturation_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(rate_check, m)?)?;
    m.add_function(wrap_pyfunction!(angle, m)?)?;
    m.add_function(wrap_pyfunction!(fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(two_level, m)?)?;
    m.add_function(wrap_pyfunction!(two_level_theta, m)?)?;
    m.add_function(wrap_pyfunction!(two_level_dispersion_integral, m)?)?;
    m.add_function(wrap_pyfunction!(grover, m)?)?;
    m.add_function(wrap_pyfunction!(grover_runtime, m)?)?;
    m.add_function(wrap_pyfunction!(grover_crossing_time, m)?)?;
    Ok(())
}
