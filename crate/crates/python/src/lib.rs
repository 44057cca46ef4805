//! Python bindings: the delta kernel, the LGL reference element, the
//! multi-element filter blocks, single runs and the convergence sweeps.

use std::collections::BTreeMap;
use std::path::Path;

use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

use dgsem_siac::cases::{ConvergenceDomain, PhysicsKind};
use dgsem_siac::config::{ResolvedRun, RunConfig};
use dgsem_siac::filter::MultiElementFilter;
use dgsem_siac::physics::{Euler, IdealMhd, PhysicsSystem};
use dgsem_siac::tables::{convergence_suite, ConvergenceSweep};
use dgsem_siac::{driver, DeltaKernel, Error, ReferenceElement};

/// Parses a convergence domain name: `unit` or `printed`.
pub fn parse_domain(name: &str) -> Result<ConvergenceDomain, String> {
    match name {
        "unit" => Ok(ConvergenceDomain::Unit),
        "printed" => Ok(ConvergenceDomain::Printed),
        other => Err(format!("unknown convergence domain '{other}' (expected 'unit' or 'printed')")),
    }
}

/// Looks up a convergence sweep by its identifier, e.g. `table3`.
pub fn find_sweep(id: &str) -> Result<ConvergenceSweep, String> {
    convergence_suite()
        .into_iter()
        .find(|s| s.id == id)
        .ok_or_else(|| format!("unknown convergence sweep '{id}'"))
}

/// Conserved-variable names of the physics a resolved run uses.
pub fn variable_names(run: &ResolvedRun) -> Vec<String> {
    let names = match run.case.physics {
        PhysicsKind::Euler => Euler::new(run.case.gamma).var_names(),
        PhysicsKind::Mhd => IdealMhd::new(run.case.gamma, run.glm).var_names(),
    };
    names.iter().map(|s| s.to_string()).collect()
}

fn to_py(err: Error) -> PyErr {
    if err.is_numerical() {
        PyArithmeticError::new_err(err.to_string())
    } else {
        PyValueError::new_err(err.to_string())
    }
}

fn matrix_rows(m: &nalgebra::DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

/// Dirac-delta kernel `P^{m,k}` scaled to half-width `epsilon`.
#[pyclass(name = "DeltaKernel", frozen)]
struct PyDeltaKernel {
    inner: DeltaKernel,
}

#[pymethods]
impl PyDeltaKernel {
    #[new]
    #[pyo3(signature = (m, k, epsilon = 1.0))]
    fn new(m: usize, k: usize, epsilon: f64) -> PyResult<Self> {
        let inner = DeltaKernel::build(m, k).and_then(|d| d.with_epsilon(epsilon)).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn epsilon(&self) -> f64 {
        self.inner.epsilon()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    /// Reference polynomial on `[-1, 1]`, zero outside.
    fn poly(&self, x: f64) -> f64 {
        self.inner.poly(x)
    }

    /// Derivative of the reference polynomial of the given order.
    fn poly_derivative(&self, order: usize, x: f64) -> f64 {
        self.inner.poly_derivative(order, x)
    }

    /// Scaled kernel `P(x / epsilon) / epsilon`.
    fn delta(&self, x: f64) -> f64 {
        self.inner.delta(x)
    }

    fn __repr__(&self) -> String {
        format!("DeltaKernel(m={}, k={}, epsilon={})", self.inner.m(), self.inner.k(), self.inner.epsilon())
    }
}

/// Legendre-Gauss-Lobatto reference element of polynomial degree `N`.
#[pyclass(name = "ReferenceElement", frozen)]
struct PyReferenceElement {
    inner: ReferenceElement,
}

#[pymethods]
impl PyReferenceElement {
    #[new]
    fn new(degree: usize) -> PyResult<Self> {
        Ok(Self { inner: ReferenceElement::new(degree).map_err(to_py)? })
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    fn nodes(&self) -> Vec<f64> {
        self.inner.nodes().to_vec()
    }

    fn weights(&self) -> Vec<f64> {
        self.inner.weights().to_vec()
    }

    /// Nodal differentiation matrix as a list of rows.
    fn diff_matrix(&self) -> Vec<Vec<f64>> {
        matrix_rows(self.inner.diff_matrix())
    }

    /// Interpolates nodal `values` at `x`.
    fn interpolate(&self, values: Vec<f64>, x: f64) -> PyResult<f64> {
        if values.len() != self.inner.num_nodes() {
            return Err(PyValueError::new_err(format!("expected {} nodal values", self.inner.num_nodes())));
        }
        Ok(self.inner.interpolate(&values, x))
    }
}

/// One-dimensional multi-element filter: the neighbour and centre blocks.
#[pyclass(name = "MultiElementFilter", frozen)]
struct PyMultiElementFilter {
    inner: MultiElementFilter,
}

#[pymethods]
impl PyMultiElementFilter {
    #[new]
    fn new(degree: usize, m: usize, k: usize, epsilon: f64) -> PyResult<Self> {
        let reference = ReferenceElement::new(degree).map_err(to_py)?;
        let kernel = DeltaKernel::build(m, k).and_then(|d| d.with_epsilon(epsilon)).map_err(to_py)?;
        Ok(Self { inner: MultiElementFilter::build(&reference, kernel).map_err(to_py)? })
    }

    /// `(left, centre, right)` blocks, each a list of rows.
    fn blocks(&self) -> (Vec<Vec<f64>>, Vec<Vec<f64>>, Vec<Vec<f64>>) {
        (matrix_rows(self.inner.phi_left()), matrix_rows(self.inner.phi_center()), matrix_rows(self.inner.phi_right()))
    }

    /// Filters the nodal values of one element from its own and its neighbours' values.
    fn apply(&self, left: Vec<f64>, center: Vec<f64>, right: Vec<f64>) -> PyResult<Vec<f64>> {
        let n = self.inner.num_nodes();
        if left.len() != n || center.len() != n || right.len() != n {
            return Err(PyValueError::new_err(format!("each element needs {n} nodal values")));
        }
        Ok(self.inner.filter_element_1d(&left, &center, &right))
    }
}

/// Outcome of a finished run.
#[pyclass(name = "RunResult", frozen)]
struct PyRunResult {
    #[pyo3(get)]
    case: String,
    #[pyo3(get)]
    time: f64,
    #[pyo3(get)]
    steps: usize,
    #[pyo3(get)]
    min_density: f64,
    #[pyo3(get)]
    min_pressure: f64,
    #[pyo3(get)]
    max_lambda: f64,
    #[pyo3(get)]
    linf: BTreeMap<String, f64>,
    #[pyo3(get)]
    conservation: BTreeMap<String, f64>,
    #[pyo3(get)]
    variables: Vec<String>,
    /// Node coordinates in storage order.
    #[pyo3(get)]
    x: Vec<f64>,
    #[pyo3(get)]
    y: Vec<f64>,
    /// Conserved variables per node, `len(x)` rows of `len(variables)` values.
    #[pyo3(get)]
    values: Vec<Vec<f64>>,
    /// Final blending weight per element, when filtering was enabled.
    #[pyo3(get)]
    lambda_: Option<Vec<f64>>,
}

fn run_resolved(resolved: &ResolvedRun) -> PyResult<PyRunResult> {
    let outcome = driver::run(resolved).map_err(to_py)?;
    let field = &outcome.field;
    let (mut x, mut y, mut values) = (Vec::new(), Vec::new(), Vec::new());
    let np = field.num_nodes();
    for n in 0..field.mesh().num_elements() {
        for j in 0..np {
            for i in 0..np {
                let (px, py) = field.node_position(n, i, j);
                x.push(px);
                y.push(py);
                values.push(field.node(n, i, j).to_vec());
            }
        }
    }
    let s = outcome.summary;
    Ok(PyRunResult {
        case: s.case,
        time: s.time,
        steps: s.steps,
        min_density: s.min_density,
        min_pressure: s.min_pressure,
        max_lambda: s.max_lambda,
        linf: s.linf,
        conservation: s.conservation,
        variables: variable_names(resolved),
        x,
        y,
        values,
        lambda_: outcome.lambda,
    })
}

/// Runs a configuration given as TOML text with optional `key=value` overrides.
#[pyfunction]
#[pyo3(signature = (config, overrides = Vec::new()))]
fn run(py: Python<'_>, config: &str, overrides: Vec<String>) -> PyResult<PyRunResult> {
    let resolved = RunConfig::from_toml_str(config, &overrides).and_then(|c| c.resolve()).map_err(to_py)?;
    py.detach(|| run_resolved(&resolved))
}

/// Runs a configuration file with optional `key=value` overrides.
#[pyfunction]
#[pyo3(signature = (path, overrides = Vec::new()))]
fn run_file(py: Python<'_>, path: &str, overrides: Vec<String>) -> PyResult<PyRunResult> {
    let resolved = RunConfig::from_file(Path::new(path), &overrides).and_then(|c| c.resolve()).map_err(to_py)?;
    py.detach(|| run_resolved(&resolved))
}

/// Runs one convergence sweep and returns `(elements, error, conservation, eoc)` rows.
#[pyfunction]
#[pyo3(signature = (sweep, levels = None, domain = "unit"))]
fn convergence_table(
    py: Python<'_>,
    sweep: &str,
    levels: Option<Vec<usize>>,
    domain: &str,
) -> PyResult<Vec<(usize, f64, f64, Option<f64>)>> {
    let sweep = find_sweep(sweep).map_err(PyValueError::new_err)?;
    let domain = parse_domain(domain).map_err(PyValueError::new_err)?;
    let levels = levels.unwrap_or_else(|| sweep.levels.to_vec());
    let rows = py.detach(|| sweep.run_levels(&levels, domain)).map_err(to_py)?;
    Ok(rows.into_iter().map(|r| (r.elements, r.error, r.cons, r.eoc)).collect())
}

/// Kernel half-width `epsilon` that covers `n_d` element widths of a degree-`N` element.
#[pyfunction]
fn support_width(degree: usize, n_d: f64) -> PyResult<f64> {
    dgsem_siac::support_width(degree, n_d).map_err(to_py)
}

#[pymodule]
fn dgsem_siac_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDeltaKernel>()?;
    m.add_class::<PyReferenceElement>()?;
    m.add_class::<PyMultiElementFilter>()?;
    m.add_class::<PyRunResult>()?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(run_file, m)?)?;
    m.add_function(wrap_pyfunction!(convergence_table, m)?)?;
    m.add_function(wrap_pyfunction!(support_width, m)?)?;
    Ok(())
}
