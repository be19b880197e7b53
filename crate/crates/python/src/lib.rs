//! Python bindings for the orbivertex core: partitions, characters, Hurwitz
//! kernels, vertex series, verification suites and local GW tables.

use std::collections::BTreeMap;

use orbivertex::characters;
use orbivertex::cli::{run_suite, Format, Output, Suite, VerifyArgs};
use orbivertex::exactnum::{format_rational, parse_rational, Rational};
use orbivertex::gw_vertex;
use orbivertex::hurwitz;
use orbivertex::localgw::{self, TableFormat};
use orbivertex::partitions::{self, Partition};
use orbivertex::series::Series;
use orbivertex::Error;
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(io) => PyOSError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn partition(parts: Vec<u32>) -> PyResult<Partition> {
    Partition::try_from(parts).map_err(to_py)
}

/// An integer partition; parts must be given in weakly decreasing order.
#[pyclass(name = "Partition", module = "pyorbivertex", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyPartition {
    inner: Partition,
}

#[pymethods]
impl PyPartition {
    #[new]
    fn new(parts: Vec<u32>) -> PyResult<Self> {
        Ok(PyPartition { inner: partition(parts)? })
    }

    #[getter]
    fn parts(&self) -> Vec<u32> {
        self.inner.parts().to_vec()
    }

    fn size(&self) -> u32 {
        self.inner.size()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn conjugate(&self) -> PyPartition {
        PyPartition { inner: self.inner.conjugate() }
    }

    fn kappa(&self) -> i64 {
        self.inner.kappa()
    }

    /// Order of the centralizer of a permutation with this cycle type.
    fn z(&self) -> u64 {
        self.inner.z()
    }

    fn hooks(&self) -> Vec<u32> {
        self.inner.hooks()
    }

    fn __repr__(&self) -> String {
        format!("Partition({:?})", self.inner.parts())
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

/// An exact truncated series. Coefficients are returned as strings.
#[pyclass(name = "Series", module = "pyorbivertex", frozen)]
struct PySeries {
    inner: Series,
}

#[pymethods]
impl PySeries {
    /// Coefficient of the monomial with the given exponents, e.g. `{"lambda": "-1"}`.
    fn coefficient(&self, exponents: BTreeMap<String, String>) -> PyResult<String> {
        let exps: Vec<(&str, Rational)> = exponents
            .iter()
            .map(|(k, v)| parse_rational(v).map(|r| (k.as_str(), r)))
            .collect::<Result<_, _>>()
            .map_err(to_py)?;
        Ok(self.inner.coeff_of(&exps).map_err(to_py)?.to_string())
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner.to_json()).map_err(|e| to_py(e.into()))
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

#[pyfunction]
fn partitions_of(d: u32) -> Vec<PyPartition> {
    partitions::partitions_of(d).into_iter().map(|inner| PyPartition { inner }).collect()
}

#[pyfunction]
fn chi(nu: Vec<u32>, mu: Vec<u32>) -> PyResult<i64> {
    characters::chi(&partition(nu)?, &partition(mu)?).map_err(to_py)
}

type Table = (Vec<Vec<u32>>, Vec<Vec<i64>>);

/// Character table of S_d as `(labels, rows)`; rows are indexed like the labels.
#[pyfunction]
fn character_table(d: u32) -> PyResult<Table> {
    let t = characters::character_table(d);
    let labels = t.partitions().iter().map(|p| p.parts().to_vec()).collect();
    let rows = t.partitions().iter().map(|p| t.row(p).map(<[i64]>::to_vec)).collect::<Result<_, _>>().map_err(to_py)?;
    Ok((labels, rows))
}

/// Coefficient of lambda^r in the Hurwitz kernel Phi_{nu,mu}.
#[pyfunction]
fn phi_coefficient(nu: Vec<u32>, mu: Vec<u32>, r: u32) -> PyResult<String> {
    let k = hurwitz::phi(&partition(nu)?, &partition(mu)?).map_err(to_py)?;
    Ok(format_rational(&k.coefficient(r)))
}

/// Disconnected double Hurwitz number with Euler characteristic `chi`.
#[pyfunction]
fn hurwitz_number(chi: i64, nu: Vec<u32>, mu: Vec<u32>) -> PyResult<String> {
    let h = hurwitz::burnside_extract(chi, &partition(nu)?, &partition(mu)?).map_err(to_py)?;
    Ok(format_rational(&h))
}

#[pyfunction]
#[pyo3(signature = (a, mu, x_order=2, lambda_order=6))]
fn g_bullet(a: u32, mu: Vec<u32>, x_order: i64, lambda_order: i64) -> PyResult<PySeries> {
    let inner = gw_vertex::g_bullet_mu(a, &partition(mu)?, x_order, lambda_order).map_err(to_py)?;
    Ok(PySeries { inner })
}

#[pyfunction]
#[pyo3(signature = (a, mu, tau=0, x_order=2, lambda_order=6))]
fn r_bullet(a: u32, mu: Vec<u32>, tau: i64, x_order: i64, lambda_order: i64) -> PyResult<PySeries> {
    let f = gw_vertex::r_bullet_tau(a, &partition(mu)?, tau, x_order, lambda_order).map_err(to_py)?;
    Ok(PySeries { inner: f.series })
}

/// Runs a named verification suite and returns `(passed, checked, first_failure)`.
#[pyfunction]
#[pyo3(signature = (suite, a=1, d=2, r=4, tau=vec![0, 1], lambda_order=5, x_order=4))]
#[allow(clippy::too_many_arguments)]
fn verify(
    py: Python<'_>,
    suite: &str,
    a: u32,
    d: u32,
    r: u32,
    tau: Vec<i64>,
    lambda_order: i64,
    x_order: i64,
) -> PyResult<(bool, usize, Option<String>)> {
    let suite: Suite = suite.parse().map_err(to_py)?;
    let args =
        VerifyArgs { suite, a, d, r, tau, lambda_order, x_order, output: Output { format: Format::Json, out: None } };
    let (report, _) = py.detach(|| run_suite(&args)).map_err(to_py)?;
    Ok((report.passed, report.checked, report.first_failure))
}

/// Local GW cap table for `(a, d)` rendered as CSV or JSON text.
#[pyfunction]
#[pyo3(signature = (a, d, lambda_order=4, x_order=2, format="csv"))]
fn local_cap_table(py: Python<'_>, a: u32, d: u32, lambda_order: i64, x_order: i64, format: &str) -> PyResult<String> {
    let format = match format {
        "csv" => TableFormat::Csv,
        "json" => TableFormat::Json,
        other => return Err(PyValueError::new_err(format!("unknown format {other:?}"))),
    };
    let block = py.detach(|| localgw::cap_block(a, d, lambda_order, x_order)).map_err(to_py)?;
    let mut out = Vec::new();
    localgw::write_table(&block, format, &mut out).map_err(to_py)?;
    String::from_utf8(out).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn pyorbivertex(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}

/// Adds the module contents to `m`.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyPartition>()?;
    m.add_class::<PySeries>()?;
    m.add_function(wrap_pyfunction!(partitions_of, m)?)?;
    m.add_function(wrap_pyfunction!(chi, m)?)?;
    m.add_function(wrap_pyfunction!(character_table, m)?)?;
    m.add_function(wrap_pyfunction!(phi_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(hurwitz_number, m)?)?;
    m.add_function(wrap_pyfunction!(g_bullet, m)?)?;
    m.add_function(wrap_pyfunction!(r_bullet, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(local_cap_table, m)?)?;
    Ok(())
}
