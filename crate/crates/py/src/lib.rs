//! Python bindings. Exact values cross the boundary as strings (`"-1/3"`,
//! `"3*c + e^2"`), numbers as Python floats and complex numbers.

use std::collections::BTreeMap;

use fingap_core::cm::residuals::{finite_gap_residuals as fg_residuals, CMConfig2, CMConfig3};
use fingap_core::cm::{self, Cm3Problem, Kernel, NewtonOptions};
use fingap_core::exact::rational::parse_rational;
use fingap_core::exact::{Rational, Var};
use fingap_core::locus3::{self, CurveFamily, Quantity};
use fingap_core::monodromy::{trivial_monodromy_constraints, Mode, MonodromyOutcome};
use fingap_core::operator::{self as op, EllipticOp, IndexData};
use fingap_core::oracle::{self, OperatorDescriptor, VerdictOptions};
use fingap_core::{verify, Error};
use num_complex::Complex64 as C64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde::Serialize;

fn err(e: Error) -> PyErr {
    match e {
        Error::InvalidInput(_)
        | Error::InvalidGaps { .. }
        | Error::Parse { .. }
        | Error::InvalidLattice(_)
        | Error::InvalidConfiguration(_)
        | Error::NonPolynomial(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// Hand a serializable value to Python as plain dicts and lists.
fn to_py<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Rationals from Python ints or strings such as "-1/3".
fn rationals(xs: &[Bound<'_, PyAny>]) -> PyResult<Vec<Rational>> {
    xs.iter().map(|x| parse_rational(&x.str()?.to_string()).map_err(err)).collect()
}

fn texts(xs: &[Rational]) -> Vec<String> {
    xs.iter().map(Rational::to_string).collect()
}

fn quantity(s: &str) -> PyResult<Quantity> {
    s.parse().map_err(err)
}

fn index_dict<'py>(py: Python<'py>, idx: &IndexData, n: usize) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("indices", texts(&idx.indices))?;
    d.set_item("gaps", texts(&idx.gaps()))?;
    d.set_item("resolved", idx.is_resolved())?;
    d.set_item("homogeneous_integrable", op::homogeneous_integrable(idx, n).0)?;
    Ok(d)
}

/// A differential operator with elliptic coefficients, e.g. `Operator("D^2 - 6*P")`.
#[pyclass(name = "Operator", module = "fingap", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyOperator {
    inner: EllipticOp,
}

#[pymethods]
impl PyOperator {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyOperator { inner: op::parse_operator(text).map_err(err)? })
    }

    /// The third-order operator with local index gaps `(q, r)`.
    #[staticmethod]
    fn from_gaps(q: i64, r: i64) -> PyResult<Self> {
        Ok(PyOperator { inner: op::third_order_from_gaps(q, r).map_err(err)? })
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    fn adjoint(&self) -> Self {
        PyOperator { inner: self.inner.adjoint() }
    }

    fn commutator(&self, other: &PyOperator) -> Self {
        PyOperator { inner: self.inner.commutator(&other.inner) }
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    /// Local indices at the pole.
    fn indices<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let (_, idx) = op::indicial_polynomial(&op::localize(&self.inner, 4)).map_err(err)?;
        index_dict(py, &idx, self.inner.order())
    }

    /// An operator of the given order commuting with this one, if any.
    #[pyo3(signature = (order, pole_bound=None))]
    fn find_commuting(&self, order: usize, pole_bound: Option<usize>) -> PyResult<Option<PyOperator>> {
        Ok(op::find_commuting(&self.inner, order, pole_bound).map_err(err)?.map(|inner| PyOperator { inner }))
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Operator('{}')", self.inner)
    }

    fn __eq__(&self, other: &PyOperator) -> bool {
        self.inner == other.inner
    }
}

/// The lattice spanned by 1 and `tau`.
#[pyclass(name = "Lattice", module = "fingap", frozen, from_py_object)]
#[derive(Clone)]
struct PyLattice {
    inner: cm::Lattice,
}

#[pymethods]
impl PyLattice {
    #[new]
    fn new(tau: C64) -> PyResult<Self> {
        Ok(PyLattice { inner: cm::Lattice::new(tau).map_err(err)? })
    }

    #[staticmethod]
    fn square() -> Self {
        PyLattice { inner: cm::Lattice::square() }
    }

    #[staticmethod]
    fn hexagonal() -> Self {
        PyLattice { inner: cm::Lattice::hexagonal() }
    }

    #[getter]
    fn tau(&self) -> C64 {
        self.inner.tau()
    }

    #[getter]
    fn g2(&self) -> C64 {
        self.inner.g2()
    }

    #[getter]
    fn g3(&self) -> C64 {
        self.inner.g3()
    }

    #[getter]
    fn j(&self) -> C64 {
        self.inner.j()
    }

    fn wp(&self, z: C64) -> PyResult<C64> {
        self.inner.wp(z).map_err(err)
    }

    fn wp_prime(&self, z: C64) -> PyResult<C64> {
        self.inner.wp_prime(z).map_err(err)
    }

    fn __repr__(&self) -> String {
        let t = self.inner.tau();
        format!("Lattice(complex({}, {}))", t.re, t.im)
    }
}

/// Local indices of the third-order operator with gaps `(q, r)`.
#[pyfunction]
fn gap_indices(q: i64, r: i64) -> Vec<String> {
    texts(&op::gap_indices(q, r))
}

/// Indices from the leading pole coefficients `b_2, .., b_n` (as strings or ints).
#[pyfunction]
fn indicial<'py>(py: Python<'py>, n: usize, b: Vec<Bound<'py, PyAny>>) -> PyResult<Bound<'py, PyDict>> {
    if n < 2 || b.len() + 1 != n {
        return Err(PyValueError::new_err(format!("an order-{n} operator needs {} coefficients", n.saturating_sub(1))));
    }
    let p = op::indicial::indicial_from_b(n, &rationals(&b)?);
    index_dict(py, &op::indicial::index_data(&p), n)
}

#[pyfunction]
#[pyo3(signature = (indices, n=None))]
fn homogeneous_integrable(indices: Vec<Bound<'_, PyAny>>, n: Option<usize>) -> PyResult<(bool, String)> {
    let idx = IndexData::from_indices(rationals(&indices)?);
    let n = n.unwrap_or(idx.indices.len());
    let (ok, why) = op::homogeneous_integrable(&idx, n);
    Ok((ok, why.to_string()))
}

/// Trivial-monodromy conditions for gaps `(q, r)`; `mode` is "middle" or "full".
#[pyfunction]
#[pyo3(signature = (q, r, mode="middle"))]
fn constraints<'py>(py: Python<'py>, q: i64, r: i64, mode: &str) -> PyResult<Bound<'py, PyAny>> {
    let cs = match mode {
        "middle" => locus3::constraints_for(q, r).map_err(err)?,
        "full" => {
            let local = op::localize(&op::third_order_from_gaps(q, r).map_err(err)?, q + r + 8);
            match trivial_monodromy_constraints(&local, Mode::Full).map_err(err)? {
                MonodromyOutcome::Constraints(cs) => cs,
                MonodromyOutcome::Unsatisfiable { reason } => return Err(PyValueError::new_err(reason)),
            }
        }
        other => return Err(PyValueError::new_err(format!("mode is 'middle' or 'full', not '{other}'"))),
    };
    to_py(py, &cs)
}

/// Branches of the locus for `(q, r)`: assignments as strings, classification, verified flag.
#[pyfunction]
#[pyo3(signature = (q, r, curve="generic"))]
fn solve_locus<'py>(py: Python<'py>, q: i64, r: i64, curve: &str) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let curve: CurveFamily = curve.parse().map_err(err)?;
    let (_, branches) = locus3::solve_locus(q, r, curve).map_err(err)?;
    branches
        .iter()
        .map(|b| {
            let d = PyDict::new(py);
            let assignments: BTreeMap<String, String> =
                b.assignments.iter().map(|(v, f)| (v.to_string(), f.to_string())).collect();
            d.set_item("assignments", assignments)?;
            d.set_item("square_relation", b.square_relation.as_ref().map(|(v, s)| (v.to_string(), s.to_string())))?;
            d.set_item("residual_conditions", b.residual_conditions.iter().map(|p| p.to_string()).collect::<Vec<_>>())?;
            d.set_item("classification", b.classification.to_string())?;
            d.set_item("verified", b.verified)?;
            Ok(d)
        })
        .collect()
}

/// Value of a branch quantity such as "c/e^2" or "j" at one `(q, r)`.
#[pyfunction]
fn branch_value(q: i64, r: i64, quantity: &str) -> PyResult<String> {
    Ok(locus3::branch_value(q, r, self::quantity(quantity)?).map_err(err)?.to_string())
}

/// The quantity as a rational function of `q`, interpolated from exact samples.
#[pyfunction]
#[pyo3(signature = (r, quantity, samples=None))]
fn reconstruct(r: i64, quantity: &str, samples: Option<Vec<i64>>) -> PyResult<String> {
    let qty = self::quantity(quantity)?;
    let samples = samples.unwrap_or_else(|| locus3::reconstruct::samples_for(r, qty));
    Ok(locus3::reconstruct_in_q(r, qty, &samples).map_err(err)?.to_string())
}

/// Published closed form in `q`, when there is one.
#[pyfunction]
fn closed_form(r: i64, quantity: &str) -> PyResult<Option<String>> {
    Ok(locus3::reference::closed_form(r, self::quantity(quantity)?).map(|f| f.to_string()))
}

/// Monodromy matrices around a circle at `center` and a verdict over `lambdas`.
#[pyfunction]
#[pyo3(signature = (operator, lattice, lambdas=None, values=None, tol=1e-8, center=C64::new(0.0, 0.0), radius_fraction=0.4))]
#[allow(clippy::too_many_arguments)]
fn monodromy<'py>(
    py: Python<'py>,
    operator: &PyOperator,
    lattice: &PyLattice,
    lambdas: Option<Vec<C64>>,
    values: Option<BTreeMap<String, C64>>,
    tol: f64,
    center: C64,
    radius_fraction: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let mut desc = OperatorDescriptor::new(operator.inner.clone(), lattice.inner.clone());
    for (name, x) in values.unwrap_or_default() {
        let v = Var::from_name(&name).ok_or_else(|| PyValueError::new_err(format!("unknown variable '{name}'")))?;
        desc = desc.with(v, x);
    }
    let lambdas = lambdas.unwrap_or_else(oracle::default_lambdas);
    let opts = VerdictOptions { center, radius_fraction, ..VerdictOptions::default() };
    let report = py.detach(|| oracle::integrability_verdict_with(&desc, &lambdas, tol, &opts)).map_err(err)?;
    to_py(py, &report)
}

/// Residuals of the pole equations of `D^2 - sum m(m+1) P(z - z_i)`.
#[pyfunction]
#[pyo3(signature = (points, multiplicities, lattice=None))]
fn finite_gap_residuals(points: Vec<C64>, multiplicities: Vec<u32>, lattice: Option<PyLattice>) -> PyResult<Vec<C64>> {
    let kernel = match lattice {
        Some(l) => Kernel::Elliptic(l.inner),
        None => Kernel::Elliptic(cm::Lattice::square()),
    };
    fg_residuals(&CMConfig2 { points, multiplicities }, &kernel).map_err(err)
}

/// Newton solve for a critical point of `F + c H1`; `vary` names the unknowns
/// among "points", "momenta", "c".
#[pyfunction]
#[pyo3(signature = (points, momenta, c, lattice, vary))]
fn cm3_critical<'py>(
    py: Python<'py>,
    points: Vec<C64>,
    momenta: Vec<C64>,
    c: C64,
    lattice: &PyLattice,
    vary: Vec<String>,
) -> PyResult<Bound<'py, PyAny>> {
    let has = |s: &str| vary.iter().any(|v| v == s);
    if let Some(bad) = vary.iter().find(|v| !["points", "momenta", "c"].contains(&v.as_str())) {
        return Err(PyValueError::new_err(format!("cannot vary '{bad}'")));
    }
    let problem = Cm3Problem {
        base: CMConfig3 { points, momenta, c },
        kernel: Kernel::Elliptic(lattice.inner.clone()),
        vary_points: has("points"),
        vary_momenta: has("momenta"),
        vary_c: has("c"),
    };
    let (cfg, report) = problem.solve(&NewtonOptions::default()).map_err(err)?;
    #[derive(Serialize)]
    struct Solved {
        config: CMConfig3,
        residual_norm: f64,
        iterations: usize,
    }
    to_py(py, &Solved { config: cfg, residual_norm: report.residual_norm, iterations: report.iterations })
}

/// Run one reproduction criterion (1 to 11).
#[pyfunction]
#[pyo3(signature = (id, seed=0))]
fn run_criterion<'py>(py: Python<'py>, id: u8, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    if !verify::CRITERIA.iter().any(|c| c.0 == id) {
        return Err(PyValueError::new_err(format!("no criterion {id}")));
    }
    let res = py.detach(|| verify::run_criterion(id, seed));
    to_py(py, &res)
}

#[pymodule]
fn fingap(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", fingap_core::VERSION)?;
    m.add_class::<PyOperator>()?;
    m.add_class::<PyLattice>()?;
    m.add_function(wrap_pyfunction!(gap_indices, m)?)?;
    m.add_function(wrap_pyfunction!(indicial, m)?)?;
    m.add_function(wrap_pyfunction!(homogeneous_integrable, m)?)?;
    m.add_function(wrap_pyfunction!(constraints, m)?)?;
    m.add_function(wrap_pyfunction!(solve_locus, m)?)?;
    m.add_function(wrap_pyfunction!(branch_value, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(monodromy, m)?)?;
    m.add_function(wrap_pyfunction!(finite_gap_residuals, m)?)?;
    m.add_function(wrap_pyfunction!(cm3_critical, m)?)?;
    m.add_function(wrap_pyfunction!(run_criterion, m)?)?;
    Ok(())
}
