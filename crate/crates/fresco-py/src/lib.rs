//! Python bindings: a `Fresco` class plus a few free functions. Rationals
//! go in as `int`, `str` or `fractions.Fraction` and come out as `Fraction`.

use std::collections::BTreeMap;

use ::fresco as core;
use core::fresco_core::default_order;
use core::series::parse_rational;
use core::transforms::{canonicalization_loss, change_variable, dual_twist, ChangeOfVariable};
use core::{invariants, Element, Error, PowerSeries, Rational};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(fresco, FrescoError, PyException);
create_exception!(fresco, PrecisionError, FrescoError);

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::InsufficientPrecision { .. } => PrecisionError::new_err(e.to_string()),
        Error::NotGeometric(_) | Error::InvalidPresentation(_) => PyValueError::new_err(e.to_string()),
        other => FrescoError::new_err(other.to_string()),
    }
}

fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let text = obj.str()?.to_string();
    parse_rational(text.trim()).ok_or_else(|| PyValueError::new_err(format!("'{}' is not a rational", text)))
}

fn fraction(py: Python<'_>, r: &Rational) -> PyResult<PyObject> {
    let cls = py.import_bound("fractions")?.getattr("Fraction")?;
    Ok(cls.call1((r.to_string(),))?.unbind())
}

fn fractions(py: Python<'_>, rs: &[Rational]) -> PyResult<Vec<PyObject>> {
    rs.iter().map(|r| fraction(py, r)).collect()
}

fn sparse_dict<'py>(py: Python<'py>, s: &PowerSeries) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new_bound(py);
    for (e, c) in s.sparse() {
        d.set_item(e, fraction(py, &c)?)?;
    }
    Ok(d)
}

fn element(py: Python<'_>, x: &Element) -> PyResult<Vec<PyObject>> {
    x.coords().iter().map(|s| Ok(sparse_dict(py, s)?.into_any().unbind())).collect()
}

/// A fresco in principal normal form.
#[pyclass(frozen, name = "Fresco", module = "fresco")]
#[derive(Clone)]
pub struct PyFresco {
    inner: core::Fresco,
}

impl From<core::Fresco> for PyFresco {
    fn from(inner: core::Fresco) -> Self {
        PyFresco { inner }
    }
}

#[pymethods]
impl PyFresco {
    /// `connections[j]` maps exponents to coefficients of `S_{j+1}`. Without
    /// `order` the connections are taken as exact polynomials.
    #[new]
    #[pyo3(signature = (lambdas, connections = Vec::new(), order = None))]
    fn new(
        lambdas: Vec<Bound<'_, PyAny>>,
        connections: Vec<BTreeMap<usize, Bound<'_, PyAny>>>,
        order: Option<usize>,
    ) -> PyResult<Self> {
        let lambda = lambdas.iter().map(rational).collect::<PyResult<Vec<_>>>()?;
        let order = order.unwrap_or_else(|| default_order(&lambda));
        let conn = connections
            .iter()
            .map(|m| {
                let terms = m.iter().map(|(e, c)| Ok((*e, rational(c)?))).collect::<PyResult<Vec<_>>>()?;
                Ok(PowerSeries::from_sparse(terms, order))
            })
            .collect::<PyResult<Vec<_>>>()?;
        core::Fresco::new(lambda, conn, order).map(Into::into).map_err(to_py_err)
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn lambdas(&self, py: Python<'_>) -> PyResult<Vec<PyObject>> {
        fractions(py, self.inner.lambda())
    }

    fn connections<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        self.inner.connections().iter().map(|s| sparse_dict(py, s)).collect()
    }

    fn steps(&self, py: Python<'_>) -> PyResult<Vec<PyObject>> {
        fractions(py, &self.inner.steps())
    }

    fn mu(&self, py: Python<'_>) -> PyResult<PyObject> {
        fraction(py, &self.inner.mu())
    }

    fn bernstein_roots(&self, py: Python<'_>) -> PyResult<Vec<PyObject>> {
        fractions(py, &self.inner.bernstein_roots())
    }

    fn padded(&self, order: usize) -> Self {
        self.inner.padded(order).into()
    }

    /// Sub-quotient of the principal flag, 1-based and inclusive.
    fn window(&self, start: usize, end: usize) -> PyResult<Self> {
        if !(1 <= start && start <= end && end <= self.inner.rank()) {
            return Err(PyValueError::new_err(format!("bad window ({}, {})", start, end)));
        }
        Ok(self.inner.window(start, end).into())
    }

    fn alphas(&self, py: Python<'_>) -> PyResult<Vec<PyObject>> {
        fractions(py, &invariants::alphas(&self.inner).map_err(to_py_err)?)
    }

    fn beta(&self, py: Python<'_>) -> PyResult<PyObject> {
        fraction(py, &invariants::beta(&self.inner).map_err(to_py_err)?)
    }

    fn beta_star(&self, py: Python<'_>) -> PyResult<PyObject> {
        fraction(py, &invariants::beta_star(&self.inner).map_err(to_py_err)?)
    }

    fn p_total(&self, py: Python<'_>) -> PyResult<PyObject> {
        fraction(py, &invariants::p_total(&self.inner).map_err(to_py_err)?)
    }

    /// `(level, [(start, end, beta), ...])`.
    fn stratum_level(&self, py: Python<'_>) -> PyResult<(usize, Vec<(usize, usize, PyObject)>)> {
        let report = invariants::stratum_level(&self.inner).map_err(to_py_err)?;
        let failing = report
            .failing
            .iter()
            .map(|w| Ok((w.start, w.end, fraction(py, &w.beta)?)))
            .collect::<PyResult<Vec<_>>>()?;
        Ok((report.level, failing))
    }

    fn is_semisimple(&self) -> PyResult<bool> {
        invariants::is_semisimple(&self.inner).map_err(to_py_err)
    }

    /// One dict per `μ`: `mu`, `particular` and `directions`, elements given
    /// as lists of coordinate dicts.
    fn rank1_families<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let families = invariants::rank1_normal_submodules(&self.inner).map_err(to_py_err)?;
        families
            .iter()
            .map(|fam| {
                let d = PyDict::new_bound(py);
                d.set_item("mu", fraction(py, &fam.mu)?)?;
                d.set_item("particular", element(py, &fam.particular)?)?;
                let dirs = fam.directions.iter().map(|x| element(py, x)).collect::<PyResult<Vec<_>>>()?;
                d.set_item("directions", dirs)?;
                Ok(d)
            })
            .collect()
    }

    fn dual(&self, delta: &Bound<'_, PyAny>) -> PyResult<Self> {
        dual_twist(&self.inner, &rational(delta)?).map(Into::into).map_err(to_py_err)
    }

    /// `theta` lists the coefficients of `a, a^2, ...`.
    fn change_variable(&self, theta: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        let mut coeffs = vec![Rational::from_integer(0.into())];
        for c in &theta {
            coeffs.push(rational(c)?);
        }
        let theta = ChangeOfVariable::new(coeffs).map_err(to_py_err)?;
        change_variable(&self.inner, &theta).map(Into::into).map_err(to_py_err)
    }

    fn __repr__(&self) -> String {
        let lambda: Vec<String> = self.inner.lambda().iter().map(ToString::to_string).collect();
        format!("Fresco(lambdas=[{}], order={})", lambda.join(", "), self.inner.order())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

#[pyfunction(name = "canonicalization_loss")]
fn py_canonicalization_loss(rank: usize) -> usize {
    canonicalization_loss(rank)
}

#[pyfunction(name = "default_order")]
fn py_default_order(lambdas: Vec<Bound<'_, PyAny>>) -> PyResult<usize> {
    let lambda = lambdas.iter().map(rational).collect::<PyResult<Vec<_>>>()?;
    Ok(default_order(&lambda))
}

#[pymodule]
#[pyo3(name = "fresco")]
fn fresco_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFresco>()?;
    m.add_function(wrap_pyfunction!(py_canonicalization_loss, m)?)?;
    m.add_function(wrap_pyfunction!(py_default_order, m)?)?;
    m.add("FrescoError", m.py().get_type_bound::<FrescoError>())?;
    m.add("PrecisionError", m.py().get_type_bound::<PrecisionError>())?;
    Ok(())
}
