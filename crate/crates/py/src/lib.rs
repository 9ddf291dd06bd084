//! Python bindings for `bcp_core`.
//!
//! `γ` arguments accept either a float or a `Gamma` instance.

use bcp_core::analytic::{self, ScaleContext};
use bcp_core::equidist::BoxCheck;
use bcp_core::{arith, counting, cyclotomic, equidist, expsums};
use pyo3::exceptions::{PyOverflowError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyComplex;

fn py_err(e: bcp_core::Error) -> PyErr {
    match e {
        bcp_core::Error::Capacity { .. } => PyOverflowError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

#[pyclass(name = "Gamma", frozen, from_py_object)]
#[derive(Clone)]
struct PyGamma(bcp_core::Gamma);

#[pymethods]
impl PyGamma {
    #[new]
    #[pyo3(signature = (value, eta = analytic::DEFAULT_ETA))]
    fn new(value: f64, eta: f64) -> PyResult<Self> {
        bcp_core::Gamma::with_eta(value, eta).map(PyGamma).map_err(py_err)
    }

    #[staticmethod]
    fn from_ratio(num: i64, den: i64) -> PyResult<Self> {
        bcp_core::Gamma::from_ratio(num, den).map(PyGamma).map_err(py_err)
    }

    #[getter]
    fn value(&self) -> f64 {
        self.0.value()
    }

    #[getter]
    fn eta(&self) -> f64 {
        self.0.eta()
    }

    /// `(n, k)` with `γ = n/k`, or `None`.
    #[getter]
    fn exact(&self) -> Option<(i64, i64)> {
        self.0.exact()
    }

    fn __repr__(&self) -> String {
        format!("Gamma({})", self.0.value())
    }
}

#[derive(FromPyObject)]
enum GammaArg {
    Gamma(PyGamma),
    Value(f64),
}

impl GammaArg {
    fn resolve(self) -> PyResult<bcp_core::Gamma> {
        match self {
            GammaArg::Gamma(g) => Ok(g.0),
            GammaArg::Value(v) => bcp_core::Gamma::new(v).map_err(py_err),
        }
    }
}

fn scale(x: f64) -> PyResult<ScaleContext> {
    ScaleContext::new(x).map_err(py_err)
}

#[pyclass(name = "PrimeTable", frozen)]
struct PyPrimeTable(bcp_core::PrimeTable);

#[pymethods]
impl PyPrimeTable {
    #[new]
    fn new(limit: u64) -> PyResult<Self> {
        arith::sieve_primes(limit).map(PyPrimeTable).map_err(py_err)
    }

    #[getter]
    fn limit(&self) -> u64 {
        self.0.limit()
    }

    #[getter]
    fn primes(&self) -> Vec<u64> {
        self.0.primes().to_vec()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn pi(&self, n: u64) -> usize {
        self.0.pi(n)
    }

    fn is_prime(&self, n: u64) -> PyResult<bool> {
        self.0
            .is_prime(n)
            .ok_or_else(|| PyValueError::new_err(format!("{n} is beyond the table limit {}", self.0.limit())))
    }

    fn range(&self, lo: u64, hi: u64) -> Vec<u64> {
        self.0.range(lo, hi).to_vec()
    }
}

#[pyclass(name = "PrimePair", frozen, get_all)]
struct PyPrimePair {
    p: u64,
    q: u64,
    inv_q_mod_p: u64,
    inv_p_mod_q: u64,
    theta: u64,
}

#[pymethods]
impl PyPrimePair {
    /// `q̄_p / p`
    fn fraction(&self) -> f64 {
        self.inv_q_mod_p as f64 / self.p as f64
    }

    fn __repr__(&self) -> String {
        format!("PrimePair(p={}, q={}, theta={})", self.p, self.q, self.theta)
    }
}

#[pyclass(name = "CountRecord", frozen, get_all)]
struct PyCountRecord {
    x: f64,
    gamma: f64,
    h_exact: u64,
    h_predicted: f64,
    ratio: f64,
    pairs_scanned: u64,
    /// seconds
    elapsed: f64,
}

impl From<counting::CountRecord> for PyCountRecord {
    fn from(r: counting::CountRecord) -> Self {
        PyCountRecord {
            x: r.x,
            gamma: r.gamma.value(),
            h_exact: r.h_exact,
            h_predicted: r.h_predicted,
            ratio: r.ratio,
            pairs_scanned: r.pairs_scanned,
            elapsed: r.elapsed.as_secs_f64(),
        }
    }
}

#[pymethods]
impl PyCountRecord {
    fn __repr__(&self) -> String {
        format!("CountRecord(x={}, h_exact={}, ratio={})", self.x, self.h_exact, self.ratio)
    }
}

#[pyclass(name = "BoxCheck", frozen, get_all)]
struct PyBoxCheck {
    p_lo: f64,
    q_lo: f64,
    range_class: &'static str,
    r_count: u64,
    r_gamma_count: u64,
    rho: f64,
    rho_mode: &'static str,
    main_term: f64,
    rel_dev: f64,
}

impl From<BoxCheck> for PyBoxCheck {
    fn from(c: BoxCheck) -> Self {
        PyBoxCheck {
            p_lo: c.dyadic_box.p_lo,
            q_lo: c.dyadic_box.q_lo,
            range_class: c.dyadic_box.range_class.as_str(),
            r_count: c.r_count,
            r_gamma_count: c.r_gamma_count,
            rho: c.rho,
            rho_mode: c.rho_mode.as_str(),
            main_term: c.main_term,
            rel_dev: c.rel_dev,
        }
    }
}

#[pyclass(name = "BoundReport", frozen, get_all)]
struct PyBoundReport {
    lemma: String,
    p: f64,
    q: f64,
    y: f64,
    z: f64,
    a_count: u64,
    sampled: bool,
    terms: u64,
    observed: f64,
    reference: f64,
    ratio: f64,
}

impl From<bcp_core::BoundReport> for PyBoundReport {
    fn from(r: bcp_core::BoundReport) -> Self {
        PyBoundReport {
            lemma: r.lemma,
            p: r.p,
            q: r.q,
            y: r.y,
            z: r.z,
            a_count: r.a_count,
            sampled: r.sampled,
            terms: r.terms,
            observed: r.observed,
            reference: r.reference,
            ratio: r.ratio,
        }
    }
}

#[pyfunction]
fn c_gamma(gamma: GammaArg) -> PyResult<f64> {
    analytic::c_gamma(&gamma.resolve()?).map_err(py_err)
}

#[pyfunction]
fn rho(t: f64, gamma: GammaArg) -> PyResult<f64> {
    analytic::rho(t, &gamma.resolve()?).map_err(py_err)
}

#[pyfunction]
fn h_exponent(gamma: f64) -> f64 {
    analytic::h_exponent(gamma)
}

#[pyfunction]
fn gamma_zero() -> f64 {
    analytic::gamma_zero()
}

#[pyfunction]
fn kappa_zero(gamma: f64) -> f64 {
    analytic::kappa_zero(gamma)
}

#[pyfunction]
fn mod_inverse(k: u64, ell: u64) -> PyResult<u64> {
    arith::mod_inverse(k, ell).map_err(py_err)
}

#[pyfunction]
fn cyclotomic_coeffs(m: u64) -> PyResult<Vec<i64>> {
    cyclotomic::cyclotomic_coeffs(m).map(|p| p.coeffs).map_err(py_err)
}

#[pyfunction]
fn theta_direct(m: u64) -> PyResult<u64> {
    cyclotomic::theta_direct(m).map_err(py_err)
}

#[pyfunction]
fn theta_carlitz(p: u64, q: u64) -> PyResult<PyPrimePair> {
    let pair = cyclotomic::theta_carlitz(p, q).map_err(py_err)?;
    Ok(PyPrimePair {
        p: pair.p,
        q: pair.q,
        inv_q_mod_p: pair.inv_q_mod_p,
        inv_p_mod_q: pair.inv_p_mod_q,
        theta: pair.theta,
    })
}

#[pyfunction]
fn h_gamma_count(py: Python<'_>, x: f64, gamma: GammaArg) -> PyResult<PyCountRecord> {
    let (ctx, g) = (scale(x)?, gamma.resolve()?);
    py.detach(|| counting::h_gamma_count(&ctx, &g)).map(Into::into).map_err(py_err)
}

#[pyfunction]
fn h_gamma_predicted(x: f64, gamma: GammaArg) -> PyResult<f64> {
    counting::h_gamma_predicted(&scale(x)?, &gamma.resolve()?).map_err(py_err)
}

#[pyfunction]
fn convergence_table(py: Python<'_>, xs: Vec<f64>, gamma: GammaArg) -> PyResult<Vec<PyCountRecord>> {
    let g = gamma.resolve()?;
    let recs = py.detach(|| counting::convergence_table(&xs, &g)).map_err(py_err)?;
    Ok(recs.into_iter().map(Into::into).collect())
}

#[pyfunction]
fn box_sweep(py: Python<'_>, x: f64, gamma: GammaArg) -> PyResult<Vec<PyBoxCheck>> {
    let (ctx, g) = (scale(x)?, gamma.resolve()?);
    let sweep = py
        .detach(|| {
            let table = arith::sieve_primes((x / 2.0).floor() as u64)?;
            equidist::box_sweep(&ctx, &g, &table)
        })
        .map_err(py_err)?;
    Ok(sweep.into_iter().map(Into::into).collect())
}

#[pyfunction]
fn star_discrepancy(points: Vec<f64>) -> PyResult<f64> {
    equidist::star_discrepancy(&points).map_err(py_err)
}

#[pyfunction]
fn erdos_turan_bound(points: Vec<f64>, a: u64) -> PyResult<f64> {
    equidist::erdos_turan_bound(&points, a).map_err(py_err)
}

#[pyfunction]
fn complete_kloosterman(py: Python<'_>, p: u64, a: i64, b: i64) -> PyResult<Bound<'_, PyComplex>> {
    let s = expsums::complete_kloosterman(p, a, b).map_err(py_err)?;
    Ok(PyComplex::from_doubles(py, s.re, s.im))
}

#[pyfunction]
fn kloosterman_prime_sum(py: Python<'_>, p: u64, a: i64, y: f64, z: f64) -> PyResult<Bound<'_, PyComplex>> {
    let table = arith::sieve_primes(z.max(2.0).floor() as u64).map_err(py_err)?;
    let s = expsums::kloosterman_prime_sum(p, a, y, z, &table).map_err(py_err)?;
    Ok(PyComplex::from_doubles(py, s.re, s.im))
}

#[pyfunction]
#[pyo3(signature = (p, y, z, seed = expsums::DEFAULT_SEED))]
fn kc_bound_report(p: u64, y: f64, z: f64, seed: u64) -> PyResult<PyBoundReport> {
    let table = arith::sieve_primes(z.max(2.0).floor() as u64).map_err(py_err)?;
    expsums::kc_bound_report(p, y, z, &table, seed).map(Into::into).map_err(py_err)
}

#[pymodule]
fn bcp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGamma>()?;
    m.add_class::<PyPrimeTable>()?;
    m.add_class::<PyPrimePair>()?;
    m.add_class::<PyCountRecord>()?;
    m.add_class::<PyBoxCheck>()?;
    m.add_class::<PyBoundReport>()?;
    m.add_function(wrap_pyfunction!(c_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(rho, m)?)?;
    m.add_function(wrap_pyfunction!(h_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_zero, m)?)?;
    m.add_function(wrap_pyfunction!(kappa_zero, m)?)?;
    m.add_function(wrap_pyfunction!(mod_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(cyclotomic_coeffs, m)?)?;
    m.add_function(wrap_pyfunction!(theta_direct, m)?)?;
    m.add_function(wrap_pyfunction!(theta_carlitz, m)?)?;
    m.add_function(wrap_pyfunction!(h_gamma_count, m)?)?;
    m.add_function(wrap_pyfunction!(h_gamma_predicted, m)?)?;
    m.add_function(wrap_pyfunction!(convergence_table, m)?)?;
    m.add_function(wrap_pyfunction!(box_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(star_discrepancy, m)?)?;
    m.add_function(wrap_pyfunction!(erdos_turan_bound, m)?)?;
    m.add_function(wrap_pyfunction!(complete_kloosterman, m)?)?;
    m.add_function(wrap_pyfunction!(kloosterman_prime_sum, m)?)?;
    m.add_function(wrap_pyfunction!(kc_bound_report, m)?)?;
    Ok(())
}
