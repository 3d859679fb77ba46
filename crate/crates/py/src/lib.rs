//! Python bindings. Matrices cross the boundary as lists of rows of `complex`;
//! any nested sequence of numbers (including a 2-D numpy array) is accepted.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use wmwg_core::geninv::{self, Residual};
use wmwg_core::harness::{self, Cell, CrossCheckOptions};
use wmwg_core::{
    wmwg as core_wmwg, ComplexMatrix, Error, FixtureName, ProjectorKind, RandomSpec, ReprMethod,
    ToleranceConfig,
};

create_exception!(wmwg, WmwgError, PyException, "Base class of every wmwg failure.");
create_exception!(wmwg, NonexistentError, WmwgError, "The requested inverse does not exist (index above 1).");
create_exception!(wmwg, InapplicableError, WmwgError, "The representation does not apply to this pair and order.");
create_exception!(wmwg, VerificationError, WmwgError, "A residual exceeded its tolerance.");

fn py_err(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::Nonexistent { .. } => NonexistentError::new_err(msg),
        Error::InapplicableMethod { .. } => InapplicableError::new_err(msg),
        Error::VerificationFailed { .. } => VerificationError::new_err(msg),
        _ => WmwgError::new_err(msg),
    }
}

trait ResultExt<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> ResultExt<T> for wmwg_core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

type Rows = Vec<Vec<Complex64>>;

fn to_matrix(rows: Rows) -> PyResult<ComplexMatrix> {
    if rows.is_empty() {
        return Err(WmwgError::new_err("matrix must have at least one row"));
    }
    ComplexMatrix::from_rows(&rows).py()
}

fn to_rows(m: &ComplexMatrix) -> Rows {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j)).collect())
        .collect()
}

fn residual_pairs(rs: Vec<Residual>) -> Vec<(String, f64)> {
    rs.into_iter().map(|r| (r.name, r.value)).collect()
}

fn tolerance(rank_tol: Option<f64>, check_tol: f64) -> PyResult<ToleranceConfig> {
    ToleranceConfig::new(rank_tol, check_tol).py()
}

/// A matrix `A` (q x n) with a nonzero weight `W` (n x q).
#[pyclass(name = "WeightedPair", module = "wmwg", frozen)]
struct PyWeightedPair {
    inner: geninv::WeightedPair,
}

#[pymethods]
impl PyWeightedPair {
    #[new]
    #[pyo3(signature = (a, w, rank_tol=None, check_tol=1e-10))]
    fn new(a: Rows, w: Rows, rank_tol: Option<f64>, check_tol: f64) -> PyResult<Self> {
        let tol = tolerance(rank_tol, check_tol)?;
        let inner = geninv::WeightedPair::with_tolerance(to_matrix(a)?, to_matrix(w)?, tol).py()?;
        Ok(Self { inner })
    }

    /// Built-in pair by name (`"ex41"`).
    #[staticmethod]
    fn fixture(name: &str) -> PyResult<Self> {
        let inner = name.parse::<FixtureName>().py()?.pair().py()?;
        Ok(Self { inner })
    }

    /// Seeded random pair with `max(Ind(AW), Ind(WA)) = index`.
    #[staticmethod]
    #[pyo3(signature = (seed, q, n, index, magnitude=1.0))]
    fn random(seed: u64, q: usize, n: usize, index: usize, magnitude: f64) -> PyResult<Self> {
        let spec = RandomSpec {
            magnitude,
            ..RandomSpec::new(seed, q, n, index)
        };
        Ok(Self {
            inner: harness::random_weighted_pair(&spec).py()?,
        })
    }

    /// Seeded random square pair with `W = I` and planted index.
    #[staticmethod]
    fn random_identity_weight(seed: u64, n: usize, index: usize) -> PyResult<Self> {
        Ok(Self {
            inner: harness::random_identity_weight_pair(seed, n, index).py()?,
        })
    }

    #[getter]
    fn a(&self) -> Rows {
        to_rows(self.inner.a())
    }

    #[getter]
    fn w(&self) -> Rows {
        to_rows(self.inner.w())
    }

    /// `(q, n)`, the shape of `A`.
    #[getter]
    fn shape(&self) -> (usize, usize) {
        (self.inner.q(), self.inner.n())
    }

    /// `max(Ind(AW), Ind(WA))`.
    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn ind_aw(&self) -> usize {
        self.inner.index_info().ind_aw
    }

    #[getter]
    fn ind_wa(&self) -> usize {
        self.inner.index_info().ind_wa
    }

    fn wmwg(&self, m: usize) -> PyResult<Rows> {
        Ok(to_rows(&core_wmwg::wmwg(&self.inner, m).py()?))
    }

    /// `A^{wm,W}` through one named representation (see `methods()`).
    fn represent(&self, m: usize, method: &str) -> PyResult<Rows> {
        let repr: ReprMethod = method.parse().py()?;
        Ok(to_rows(&core_wmwg::represent(&self.inner, m, repr).py()?))
    }

    /// `A^{wm,W}` from the SVD-based block form.
    fn canonical(&self, m: usize) -> PyResult<Rows> {
        Ok(to_rows(&core_wmwg::canonical_wmwg(&self.inner, m).py()?))
    }

    /// One of `WAW_X`, `X_WAW`, `AW_X_W`, `W_X_WA`.
    fn projector(&self, m: usize, kind: &str) -> PyResult<Rows> {
        let kind: ProjectorKind = kind.parse().py()?;
        Ok(to_rows(&core_wmwg::projector(&self.inner, m, kind).py()?))
    }

    fn weighted_drazin(&self) -> PyResult<Rows> {
        Ok(to_rows(&geninv::weighted_drazin(&self.inner).py()?))
    }

    fn weighted_core_ep(&self) -> PyResult<Rows> {
        Ok(to_rows(&geninv::weighted_core_ep(&self.inner).py()?))
    }

    fn weighted_weak_group(&self) -> PyResult<Rows> {
        Ok(to_rows(&geninv::weighted_weak_group(&self.inner).py()?))
    }

    fn weighted_group(&self) -> PyResult<Rows> {
        Ok(to_rows(&geninv::weighted_group(&self.inner).py()?))
    }

    fn weighted_core(&self) -> PyResult<Rows> {
        Ok(to_rows(&geninv::weighted_core(&self.inner).py()?))
    }

    #[pyo3(signature = (m_values=vec![1, 2, 3], pinv_at_k=false))]
    fn cross_check(&self, m_values: Vec<usize>, pinv_at_k: bool) -> PyResult<PyCrossCheckReport> {
        let opts = CrossCheckOptions {
            pinv_power_at_k: pinv_at_k,
        };
        let inner = harness::cross_check_with(&self.inner, &m_values, opts).py()?;
        Ok(PyCrossCheckReport { inner })
    }

    /// Normalized residuals of the defining equations and projectors, as `(name, value)`.
    fn residuals(&self, m: usize) -> PyResult<Vec<(String, f64)>> {
        Ok(residual_pairs(harness::residual_suite(&self.inner, m).py()?))
    }

    /// Residuals of the reductions that apply to this pair and order.
    fn reductions(&self, m: usize) -> PyResult<Vec<(String, f64)>> {
        Ok(residual_pairs(harness::reduction_suite(&self.inner, m).py()?))
    }

    /// Raise `VerificationError` if any residual exceeds the pair's check tolerance.
    fn verify(&self, m: usize) -> PyResult<()> {
        let tol = self.inner.tol().check_tol;
        let mut all = harness::residual_suite(&self.inner, m).py()?;
        all.extend(harness::reduction_suite(&self.inner, m).py()?);
        match all.into_iter().find(|r| r.value.is_nan() || r.value > tol) {
            Some(r) => Err(py_err(Error::VerificationFailed {
                name: r.name,
                residual: r.value,
                tol,
            })),
            None => Ok(()),
        }
    }

    fn __repr__(&self) -> String {
        let info = self.inner.index_info();
        format!(
            "WeightedPair(shape={:?}, ind_aw={}, ind_wa={})",
            (self.inner.q(), self.inner.n()),
            info.ind_aw,
            info.ind_wa
        )
    }
}

/// Frobenius distance of each representation from the definition, per order.
#[pyclass(name = "CrossCheckReport", module = "wmwg", frozen)]
struct PyCrossCheckReport {
    inner: harness::CrossCheckReport,
}

#[pymethods]
impl PyCrossCheckReport {
    #[getter]
    fn m_values(&self) -> Vec<usize> {
        self.inner.m_values.clone()
    }

    /// `(method, m, error)` per cell; `error` is `None` where the method does not apply.
    fn cells(&self) -> Vec<(String, usize, Option<f64>)> {
        self.inner
            .cells()
            .map(|(method, m, cell)| (method.to_string(), m, cell.value()))
            .collect()
    }

    /// `(method, m, reason)` for every inapplicable cell.
    fn inapplicable(&self) -> Vec<(String, usize, String)> {
        self.inner
            .cells()
            .filter_map(|(method, m, cell)| match cell {
                Cell::Inapplicable { reason } => Some((method.to_string(), m, reason.clone())),
                Cell::Error { .. } => None,
            })
            .collect()
    }

    fn applicable_count(&self) -> usize {
        self.inner.applicable_count()
    }

    fn max_error(&self) -> f64 {
        self.inner.max_error()
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }
}

#[pyfunction]
#[pyo3(signature = (a, rank_tol=None))]
fn pinv(a: Rows, rank_tol: Option<f64>) -> PyResult<Rows> {
    let tol = tolerance(rank_tol, 1e-10)?;
    Ok(to_rows(&geninv::moore_penrose(&to_matrix(a)?, &tol).py()?))
}

#[pyfunction]
#[pyo3(signature = (a, rank_tol=None))]
fn drazin(a: Rows, rank_tol: Option<f64>) -> PyResult<Rows> {
    let tol = tolerance(rank_tol, 1e-10)?;
    Ok(to_rows(&geninv::drazin(&to_matrix(a)?, &tol).py()?))
}

#[pyfunction]
#[pyo3(signature = (a, rank_tol=None))]
fn group_inverse(a: Rows, rank_tol: Option<f64>) -> PyResult<Rows> {
    let tol = tolerance(rank_tol, 1e-10)?;
    Ok(to_rows(&geninv::group_inverse(&to_matrix(a)?, &tol).py()?))
}

#[pyfunction]
#[pyo3(signature = (a, rank_tol=None))]
fn core_inverse(a: Rows, rank_tol: Option<f64>) -> PyResult<Rows> {
    let tol = tolerance(rank_tol, 1e-10)?;
    Ok(to_rows(&geninv::core_inverse(&to_matrix(a)?, &tol).py()?))
}

#[pyfunction]
#[pyo3(signature = (a, rank_tol=None))]
fn core_ep(a: Rows, rank_tol: Option<f64>) -> PyResult<Rows> {
    let tol = tolerance(rank_tol, 1e-10)?;
    Ok(to_rows(&geninv::core_ep(&to_matrix(a)?, &tol).py()?))
}

#[pyfunction]
#[pyo3(signature = (a, rank_tol=None))]
fn weak_group(a: Rows, rank_tol: Option<f64>) -> PyResult<Rows> {
    let tol = tolerance(rank_tol, 1e-10)?;
    Ok(to_rows(&geninv::weak_group(&to_matrix(a)?, &tol).py()?))
}

#[pyfunction]
#[pyo3(signature = (a, m, rank_tol=None))]
fn m_weak_group(a: Rows, m: usize, rank_tol: Option<f64>) -> PyResult<Rows> {
    let tol = tolerance(rank_tol, 1e-10)?;
    Ok(to_rows(&geninv::m_weak_group(&to_matrix(a)?, m, &tol).py()?))
}

/// Names accepted by `WeightedPair.represent`.
#[pyfunction]
fn methods() -> Vec<&'static str> {
    ReprMethod::ALL.iter().map(|m| m.name()).collect()
}

/// Names accepted by `WeightedPair.projector`.
#[pyfunction]
fn projector_kinds() -> Vec<&'static str> {
    ProjectorKind::ALL.iter().map(|k| k.name()).collect()
}

#[pymodule]
fn wmwg(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("WmwgError", py.get_type::<WmwgError>())?;
    m.add("NonexistentError", py.get_type::<NonexistentError>())?;
    m.add("InapplicableError", py.get_type::<InapplicableError>())?;
    m.add("VerificationError", py.get_type::<VerificationError>())?;
    m.add_class::<PyWeightedPair>()?;
    m.add_class::<PyCrossCheckReport>()?;
    m.add_function(wrap_pyfunction!(pinv, m)?)?;
    m.add_function(wrap_pyfunction!(drazin, m)?)?;
    m.add_function(wrap_pyfunction!(group_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(core_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(core_ep, m)?)?;
    m.add_function(wrap_pyfunction!(weak_group, m)?)?;
    m.add_function(wrap_pyfunction!(m_weak_group, m)?)?;
    m.add_function(wrap_pyfunction!(methods, m)?)?;
    m.add_function(wrap_pyfunction!(projector_kinds, m)?)?;
    Ok(())
}
