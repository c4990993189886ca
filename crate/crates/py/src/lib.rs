//! Python bindings: exact cyclotomic scalars, the odd-characteristic Weil
//! representation, the even-characteristic space, and the verification and
//! dump entry points of the command-line tool.

use std::sync::Arc;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use weilrep::field::FiniteField;
use weilrep::group::DEFAULT_BUDGET;
use weilrep::linalg::CycloMatrix;
use weilrep::rep::MatrixRep;
use weilrep::ring::{FiniteRing, SMat};
use weilrep::suite::{self, Case, Params};
use weilrep::symplectic::{sp_generators, SymplecticElement};
use weilrep::weil_even::EvenSpace as CoreEvenSpace;
use weilrep::weil_odd::WeilRep as CoreWeilRep;
use weilrep::{CyclotomicNumber, Error};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::InvalidArgument(_) | Error::NotInGroup(_) | Error::WrongCase(_) | Error::Mismatch(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// An element of `Q(ζ_n)` with rational coordinates.
#[pyclass(name = "Cyclotomic", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyCyclotomic(CyclotomicNumber);

#[pymethods]
impl PyCyclotomic {
    #[staticmethod]
    fn root_of_unity(n: u32, k: i64) -> Self {
        PyCyclotomic(CyclotomicNumber::root_of_unity(n, k))
    }

    #[staticmethod]
    fn integer(v: i64) -> Self {
        PyCyclotomic(CyclotomicNumber::from_int(v))
    }

    #[getter]
    fn conductor(&self) -> u32 {
        self.0.conductor()
    }

    /// Coordinates on the power basis as `(numerator, denominator)` strings.
    #[getter]
    fn coeffs(&self) -> Vec<(String, String)> {
        self.0
            .coeffs()
            .iter()
            .map(|c| (c.numer().to_string(), c.denom().to_string()))
            .collect()
    }

    fn conjugate(&self) -> Self {
        PyCyclotomic(self.0.conjugate())
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn __add__(&self, o: &Self) -> Self {
        PyCyclotomic(&self.0 + &o.0)
    }

    fn __sub__(&self, o: &Self) -> Self {
        PyCyclotomic(&self.0 - &o.0)
    }

    fn __mul__(&self, o: &Self) -> Self {
        PyCyclotomic(&self.0 * &o.0)
    }

    fn __neg__(&self) -> Self {
        PyCyclotomic(-&self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Cyclotomic({})", self.0)
    }
}

// `Vec<u8>` would cross into Python as `bytes`.
fn widen(rows: Vec<Vec<u8>>) -> Vec<Vec<u32>> {
    rows.into_iter().map(|r| r.into_iter().map(u32::from).collect()).collect()
}

fn to_py_matrix(m: &CycloMatrix) -> Vec<Vec<PyCyclotomic>> {
    m.rows().into_iter().map(|r| r.into_iter().map(PyCyclotomic).collect()).collect()
}

/// The Weil representation `π_{ψ^a}` of `Sp_{2m}(F_q)`, `q` odd, extended to
/// similitudes with square-class multiplier.
#[pyclass(name = "WeilRep", frozen)]
struct PyWeilRep {
    field: Arc<FiniteField>,
    inner: Arc<CoreWeilRep>,
}

impl PyWeilRep {
    fn element(&self, rows: Vec<Vec<u8>>) -> PyResult<SymplecticElement> {
        let n = 2 * self.inner.m();
        if rows.len() != n || rows.iter().any(|r| r.len() != n || r.iter().any(|&c| c as usize >= self.field.size())) {
            return Err(PyValueError::new_err(format!("expected a {n}×{n} matrix over F_{}", self.field.size())));
        }
        let matrix = SMat::from_rows(&rows).map_err(py_err)?;
        SymplecticElement::new(&*self.field, matrix).map_err(py_err)
    }
}

#[pymethods]
impl PyWeilRep {
    #[new]
    #[pyo3(signature = (q, m = 1, twist = 1))]
    fn new(q: u32, m: usize, twist: u8) -> PyResult<Self> {
        let field = FiniteField::shared(q).map_err(py_err)?;
        let inner = CoreWeilRep::new(field.clone(), m, twist).map_err(py_err)?;
        Ok(PyWeilRep {
            field,
            inner: Arc::new(inner),
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    /// Generators of `Sp(W)` as row lists.
    fn generators(&self) -> Vec<Vec<Vec<u32>>> {
        sp_generators(&*self.field, self.inner.m()).iter().map(|g| widen(g.matrix.rows())).collect()
    }

    /// `π(g)` for `g` given by its rows (row vectors, `w ↦ wg`).
    fn matrix(&self, rows: Vec<Vec<u8>>) -> PyResult<Vec<Vec<PyCyclotomic>>> {
        let g = self.element(rows)?;
        Ok(to_py_matrix(&*self.inner.matrix(&g).map_err(py_err)?))
    }

    fn character(&self, rows: Vec<Vec<u8>>) -> PyResult<PyCyclotomic> {
        let g = self.element(rows)?;
        Ok(PyCyclotomic(self.inner.character(&g).map_err(py_err)?))
    }

    /// The Gauss sum `γ(ψ^a)`.
    fn gamma(&self) -> PyCyclotomic {
        PyCyclotomic(self.inner.gamma().clone())
    }
}

/// `W = W̃/2W̃` over `F_{2^d}` with the forms `β` and `⟨,⟩_W`.
#[pyclass(name = "EvenSpace", frozen)]
struct PyEvenSpace(Arc<CoreEvenSpace>);

#[pymethods]
impl PyEvenSpace {
    #[new]
    #[pyo3(signature = (d, m = 1))]
    fn new(d: u32, m: usize) -> PyResult<Self> {
        Ok(PyEvenSpace(CoreEvenSpace::new(d, m).map_err(py_err)?))
    }

    #[getter]
    fn size(&self) -> usize {
        self.0.size()
    }

    fn points(&self) -> Vec<Vec<u32>> {
        widen(self.0.points().to_vec())
    }

    fn beta(&self, v: Vec<u8>, w: Vec<u8>) -> PyResult<u8> {
        self.check(&v)?;
        self.check(&w)?;
        Ok(self.0.beta(&v, &w))
    }

    fn form(&self, v: Vec<u8>, w: Vec<u8>) -> PyResult<u8> {
        self.check(&v)?;
        self.check(&w)?;
        Ok(self.0.form_w(&v, &w))
    }
}

impl PyEvenSpace {
    fn check(&self, v: &[u8]) -> PyResult<()> {
        let q = self.0.field().size();
        if v.len() != 2 * self.0.m() || v.iter().any(|&c| c as usize >= q) {
            return Err(PyValueError::new_err(format!("expected {} coordinates below {q}", 2 * self.0.m())));
        }
        Ok(())
    }
}

fn params(case: &str, q: Option<u32>, d: Option<u32>, m: usize, exhaustive: bool, budget: usize) -> PyResult<Params> {
    let case = match case {
        "odd" => Case::Odd,
        "even" => Case::Even,
        other => return Err(PyValueError::new_err(format!("case must be 'odd' or 'even', got {other:?}"))),
    };
    let p = Params {
        case,
        q,
        d,
        m,
        exhaustive,
        budget,
    };
    p.validate().map_err(py_err)?;
    Ok(p)
}

/// Runs verification suites and returns the JSON report.
#[pyfunction]
#[pyo3(signature = (case, q = None, d = None, m = 1, suites = "all", exhaustive = false, budget = DEFAULT_BUDGET))]
fn verify(py: Python<'_>, case: &str, q: Option<u32>, d: Option<u32>, m: usize, suites: &str, exhaustive: bool, budget: usize) -> PyResult<String> {
    let p = params(case, q, d, m, exhaustive, budget)?;
    let selected = suite::parse_selection(p.case, suites).map_err(py_err)?;
    py.detach(|| suite::run(&p, &selected).and_then(|r| r.to_json())).map_err(py_err)
}

/// Builds a dump object and returns it as JSON.
#[pyfunction]
#[pyo3(signature = (case, object, q = None, d = None, m = 1, budget = DEFAULT_BUDGET))]
fn dump(py: Python<'_>, case: &str, object: &str, q: Option<u32>, d: Option<u32>, m: usize, budget: usize) -> PyResult<String> {
    let p = params(case, q, d, m, false, budget)?;
    py.detach(|| suite::dump(&p, object).and_then(|d| d.to_json())).map_err(py_err)
}

#[pymodule]
fn weilrep_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCyclotomic>()?;
    m.add_class::<PyWeilRep>()?;
    m.add_class::<PyEvenSpace>()?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(dump, m)?)?;
    m.add("SCHEMA", suite::SCHEMA)?;
    Ok(())
}
