//! Python bindings for `fermi-seas`.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use fermi_seas::asymptotics::{self, EntropySeries, FitWindow, SymmetricBranch};
use fermi_seas::correlations::infinite_sequence;
use fermi_seas::entropy::entropy_for_blocks;
use fermi_seas::oracle::{self, Normalization};
use fermi_seas::{spectrum, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidParams(_) | Error::Domain(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// Field `h` and current driving field `lambda` of the chain.
#[pyclass(name = "ModelParams", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyModelParams {
    inner: spectrum::ModelParams,
}

#[pymethods]
impl PyModelParams {
    #[new]
    #[pyo3(signature = (h, lambda_))]
    fn new(h: f64, lambda_: f64) -> PyResult<Self> {
        spectrum::ModelParams::new(h, lambda_).map(|inner| Self { inner }).map_err(to_py)
    }

    /// Point on the line h * lambda = 1 with the given 1/lambda.
    #[staticmethod]
    fn symmetric_line(inverse_lambda: f64) -> PyResult<Self> {
        spectrum::ModelParams::symmetric_line(inverse_lambda).map(|inner| Self { inner }).map_err(to_py)
    }

    #[getter]
    fn h(&self) -> f64 {
        self.inner.h()
    }

    #[getter]
    fn lambda_(&self) -> f64 {
        self.inner.lambda()
    }

    /// Occupied arcs of the Brillouin zone as `(start, end)` pairs.
    fn fermi_seas(&self) -> Vec<(f64, f64)> {
        spectrum::fermi_seas(&self.inner).seas().iter().map(|i| (i.start, i.end)).collect()
    }

    fn dispersion(&self, k: f64) -> f64 {
        spectrum::dispersion(k, &self.inner)
    }

    fn current_density(&self) -> f64 {
        spectrum::current_density(&self.inner)
    }

    /// Phase name, current density and magnetization.
    fn phase<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let label = spectrum::classify_phase(&self.inner);
        let d = PyDict::new(py);
        d.set_item("phase", label.phase.as_str())?;
        d.set_item("current_density", label.current_density)?;
        d.set_item("magnetization", label.magnetization)?;
        Ok(d)
    }

    /// Correlators `g_0 ... g_max_lag` of the infinite chain.
    fn correlators(&self, max_lag: usize) -> Vec<Complex64> {
        infinite_sequence(&self.inner, max_lag).coefficients().to_vec()
    }

    /// Entropy (nats) of a block of `block` sites.
    fn entropy(&self, py: Python<'_>, block: usize) -> PyResult<f64> {
        let p = self.inner;
        py.detach(|| entropy_for_blocks(&p, &[block])).map(|v| v[0].entropy).map_err(to_py)
    }

    /// Entropies for several block sizes, in input order.
    fn entropies(&self, py: Python<'_>, blocks: Vec<usize>) -> PyResult<Vec<f64>> {
        let p = self.inner;
        py.detach(|| entropy_for_blocks(&p, &blocks))
            .map(|v| v.into_iter().map(|e| e.entropy).collect())
            .map_err(to_py)
    }

    /// Fit `S = a ln L + b` over `[window_min, window_max]`.
    #[pyo3(signature = (window_min, window_max, points = asymptotics::DEFAULT_GRID_POINTS))]
    fn fit<'py>(
        &self,
        py: Python<'py>,
        window_min: usize,
        window_max: usize,
        points: usize,
    ) -> PyResult<Bound<'py, PyDict>> {
        if window_min == 0 || window_max <= window_min || points < 2 {
            return Err(PyValueError::new_err("need 1 <= window_min < window_max and points >= 2"));
        }
        let p = self.inner;
        let window = FitWindow { min: window_min, max: window_max };
        let blocks = asymptotics::paired_blocks(&asymptotics::geometric_grid(window_min, window_max, points));
        let fit = py
            .detach(|| EntropySeries::compute(p, &blocks).and_then(|s| asymptotics::fit_log_growth(&s, window)))
            .map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("prefactor", fit.prefactor)?;
        d.set_item("offset", fit.offset)?;
        d.set_item("residual_rms", fit.residual_rms)?;
        d.set_item("points_used", fit.points_used)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!("ModelParams(h={}, lambda_={})", self.inner.h(), self.inner.lambda())
    }
}

/// Closed-form constant term of the entropy on the line h * lambda = 1.
#[pyfunction]
fn analytic_s0(inverse_lambda: f64) -> PyResult<f64> {
    let lambda = 1.0 / inverse_lambda;
    let branch = SymmetricBranch::for_lambda(lambda)
        .ok_or_else(|| PyValueError::new_err("1/lambda must lie in (0, 1) and differ from 1/sqrt(2)"))?;
    asymptotics::analytic_s0(lambda, branch).map_err(to_py)
}

/// Exact-diagonalization entropies of leading blocks of an `sites`-site ring
/// next to the correlation-matrix values.
#[pyfunction]
#[pyo3(signature = (sites, params, blocks, normalization = "spin-half"))]
fn oracle_compare<'py>(
    py: Python<'py>,
    sites: usize,
    params: PyModelParams,
    blocks: Vec<usize>,
    normalization: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let norm = match normalization {
        "pauli" => Normalization::Pauli,
        "spin-half" => Normalization::SpinHalf,
        other => return Err(PyValueError::new_err(format!("unknown normalization `{other}`"))),
    };
    let p = params.inner;
    let cmp = py.detach(|| oracle::compare_with_correlations(sites, &p, &blocks, norm)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("ground_energy", cmp.ground_energy)?;
    d.set_item("gap", cmp.gap)?;
    d.set_item("exact", cmp.rows.iter().map(|r| r.exact).collect::<Vec<_>>())?;
    d.set_item("correlation", cmp.rows.iter().map(|r| r.correlation).collect::<Vec<_>>())?;
    d.set_item("max_difference", cmp.max_difference())?;
    Ok(d)
}

#[pymodule]
fn fermi_seas_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModelParams>()?;
    m.add_function(wrap_pyfunction!(analytic_s0, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_compare, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
