//! Python bindings: the set type, the random model, and the numeric kernels.
//!
//! Build with `cargo build -p sidonlab-py`, then import the produced cdylib
//! as `sidonlab_py` (see python/smoke_test.py for the rename dance).

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use sidonlab::model::{self, RandomModelParams};
use sidonlab::report;
use sidonlab::set::{self, IntegerSet};
use sidonlab::{analysis, quad, special, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::NonConvergence { .. } | Error::BudgetExceeded(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        other => PyValueError::new_err(other.to_string()),
    }
}

/// A finite set of positive integers kept sorted.
#[pyclass(name = "IntegerSet", frozen, from_py_object)]
#[derive(Clone)]
struct PySet {
    inner: IntegerSet,
}

#[pymethods]
impl PySet {
    #[new]
    fn new(elements: Vec<u64>) -> PyResult<Self> {
        Ok(PySet {
            inner: IntegerSet::from_values(elements).map_err(to_py)?,
        })
    }

    fn elements(&self) -> Vec<u64> {
        self.inner.elements().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __contains__(&self, n: u64) -> bool {
        self.inner.contains(n)
    }

    fn __repr__(&self) -> String {
        let e = self.inner.elements();
        if e.len() <= 8 {
            format!("IntegerSet({e:?})")
        } else {
            format!(
                "IntegerSet([{}, {}, {}, ...; {} elements])",
                e[0],
                e[1],
                e[2],
                e.len()
            )
        }
    }

    fn max(&self) -> Option<u64> {
        self.inner.max()
    }

    /// Number of elements ≤ x.
    fn counting_function(&self, x: u64) -> u64 {
        self.inner.counting_function(x)
    }

    fn truncate(&self, n: u64) -> Self {
        PySet {
            inner: self.inner.truncate(n),
        }
    }

    fn difference(&self, other: &PySet) -> Self {
        PySet {
            inner: self.inner.difference(&other.inner),
        }
    }

    /// Newline-delimited decimal serialization.
    fn to_text(&self) -> String {
        self.inner.to_lines()
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(PySet {
            inner: IntegerSet::from_lines(text).map_err(to_py)?,
        })
    }
}

#[pyfunction]
fn greedy_sidon(k: usize) -> PySet {
    PySet {
        inner: set::greedy_sidon(k),
    }
}

#[pyfunction]
fn is_sidon(s: &PySet) -> bool {
    set::is_sidon(&s.inner)
}

#[pyfunction]
fn is_bhg(s: &PySet, h: u32, g: u64) -> PyResult<bool> {
    set::is_bhg(&s.inner, h, g).map_err(to_py)
}

/// Number of non-decreasing h-tuples from the set summing to n.
#[pyfunction]
fn rep_count(s: &PySet, h: u32, n: u64) -> PyResult<u64> {
    set::rep_count(&s.inner, h, n).map_err(to_py)
}

/// Elements of the k-fold sumset that land in [1, n].
#[pyfunction]
fn sumset(sets: Vec<PySet>, n: u64) -> PyResult<PySet> {
    let refs: Vec<&IntegerSet> = sets.iter().map(|s| &s.inner).collect();
    Ok(PySet {
        inner: set::sumset(&refs, n).map_err(to_py)?,
    })
}

#[pyfunction]
fn generate(c: f64, n: u64, seed: u64) -> PyResult<PySet> {
    let params = RandomModelParams::new(c, n, seed).map_err(to_py)?;
    Ok(PySet {
        inner: model::generate(&params),
    })
}

#[pyfunction]
fn violation_set(s: &PySet) -> PySet {
    PySet {
        inner: model::violation_set(&s.inner),
    }
}

#[pyfunction]
fn prune(s: &PySet) -> PySet {
    PySet {
        inner: model::prune(&s.inner),
    }
}

#[pyfunction]
fn z_statistic(s: &PySet, n: u64) -> u64 {
    model::z_statistic(&s.inner, n)
}

/// (value, degenerate_part, quadruple_part, approximate) by exact summation.
#[pyfunction]
fn expected_z(c: f64, n: u64) -> PyResult<(f64, f64, f64, bool)> {
    let e = model::expected_z(c, n).map_err(to_py)?;
    Ok((e.value, e.degenerate_part, e.quadruple_part, e.approximate))
}

/// Same shape as expected_z, switching to the asymptotic path for large n.
#[pyfunction]
fn expected_z_estimate(c: f64, n: u64) -> PyResult<(f64, f64, f64, bool)> {
    let e = model::expected_z_estimate(c, n).map_err(to_py)?;
    Ok((e.value, e.degenerate_part, e.quadruple_part, e.approximate))
}

#[pyfunction]
fn riemann_sum(n: u64) -> PyResult<f64> {
    model::riemann_sum(n).map_err(to_py)
}

/// Campaign rows as CSV text (columns as in the CLI).
#[pyfunction]
fn campaign_csv(c: f64, n: u64, trials: u64, seed: u64) -> PyResult<String> {
    let params = RandomModelParams::new(c, n, seed).map_err(to_py)?;
    let rep = model::run_campaign(&params, trials).map_err(to_py)?;
    Ok(report::campaign_csv(&rep))
}

#[pyfunction]
fn evaluate_f(x: f64, y: f64, z: f64) -> PyResult<f64> {
    quad::evaluate_f(x, y, z).map_err(to_py)
}

/// (value, error_estimate, evaluations) of the singular integral.
#[pyfunction]
fn integrate_singular() -> PyResult<(f64, f64, u64)> {
    let q = quad::integrate_singular().map_err(to_py)?;
    Ok((q.value, q.error_estimate, q.evaluations))
}

#[pyfunction]
fn integrate_singular_cubature() -> PyResult<(f64, f64, u64)> {
    let q = quad::integrate_singular_cubature().map_err(to_py)?;
    Ok((q.value, q.error_estimate, q.evaluations))
}

#[pyfunction]
fn integrate_truncated(m: f64) -> PyResult<(f64, f64, u64)> {
    let q = quad::integrate_truncated(m).map_err(to_py)?;
    Ok((q.value, q.error_estimate, q.evaluations))
}

#[pyfunction]
#[pyo3(name = "gamma")]
fn gamma_py(x: f64) -> PyResult<f64> {
    special::gamma(x).map_err(to_py)
}

#[pyfunction]
#[pyo3(name = "incomplete_beta")]
fn incomplete_beta_py(x: f64, p: f64, q: f64) -> PyResult<f64> {
    special::incomplete_beta(x, p, q).map_err(to_py)
}

#[pyfunction]
fn beta_integral(alpha: f64, beta: f64) -> PyResult<f64> {
    analysis::beta_integral(alpha, beta).map_err(to_py)
}

#[pyfunction]
fn sss_density(c: f64) -> f64 {
    analysis::sss_density(c)
}

#[pyfunction]
fn sst_bound(c: f64) -> f64 {
    analysis::sst_bound(c)
}

#[pyfunction]
fn density_lower_bound(c: f64) -> f64 {
    analysis::density_lower_bound(c)
}

/// (c_star, F_star) maximizing the density lower bound on [0, 1].
#[pyfunction]
fn optimize_bound() -> (f64, f64) {
    let b = analysis::optimize_bound();
    (b.c_star, b.f_star)
}

#[pyfunction]
fn expected_count_s(c: f64, n: u64) -> PyResult<f64> {
    analysis::expected_count_s(c, n).map_err(to_py)
}

#[pymodule]
fn sidonlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySet>()?;
    m.add_function(wrap_pyfunction!(greedy_sidon, m)?)?;
    m.add_function(wrap_pyfunction!(is_sidon, m)?)?;
    m.add_function(wrap_pyfunction!(is_bhg, m)?)?;
    m.add_function(wrap_pyfunction!(rep_count, m)?)?;
    m.add_function(wrap_pyfunction!(sumset, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(violation_set, m)?)?;
    m.add_function(wrap_pyfunction!(prune, m)?)?;
    m.add_function(wrap_pyfunction!(z_statistic, m)?)?;
    m.add_function(wrap_pyfunction!(expected_z, m)?)?;
    m.add_function(wrap_pyfunction!(expected_z_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(riemann_sum, m)?)?;
    m.add_function(wrap_pyfunction!(campaign_csv, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_f, m)?)?;
    m.add_function(wrap_pyfunction!(integrate_singular, m)?)?;
    m.add_function(wrap_pyfunction!(integrate_singular_cubature, m)?)?;
    m.add_function(wrap_pyfunction!(integrate_truncated, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_py, m)?)?;
    m.add_function(wrap_pyfunction!(incomplete_beta_py, m)?)?;
    m.add_function(wrap_pyfunction!(beta_integral, m)?)?;
    m.add_function(wrap_pyfunction!(sss_density, m)?)?;
    m.add_function(wrap_pyfunction!(sst_bound, m)?)?;
    m.add_function(wrap_pyfunction!(density_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(optimize_bound, m)?)?;
    m.add_function(wrap_pyfunction!(expected_count_s, m)?)?;
    Ok(())
}
