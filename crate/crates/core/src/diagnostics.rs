//! Error norms, conservation errors and experimental orders of convergence.

use std::fmt::Write as _;

use crate::dg::{CartesianMesh, SolutionField};
use crate::error::{Error, Result};
use crate::reference::lgl_nodes_weights;

/// Nodal maximum error of variable `var` against a conserved-state function.
pub fn linf_error(field: &SolutionField, exact: &dyn Fn(f64, f64, f64, &mut [f64]), t: f64, var: usize) -> f64 {
    let np = field.num_nodes();
    let mut ue = vec![0.0; field.num_vars()];
    let mut err = 0.0_f64;
    for n in 0..field.mesh().num_elements() {
        for j in 0..np {
            for i in 0..np {
                let (x, y) = field.node_position(n, i, j);
                exact(x, y, t, &mut ue);
                err = err.max((field.get(n, i, j, var) - ue[var]).abs());
            }
        }
    }
    err
}

/// `sum_n sum_ij J w_i w_j u_ij` for variable `var`, accumulated in element order.
pub fn integrate(field: &SolutionField, var: usize) -> f64 {
    let w = field.reference().weights();
    let np = field.num_nodes();
    let jac = field.mesh().jacobian();
    let mut total = 0.0;
    for n in 0..field.mesh().num_elements() {
        let mut s = 0.0;
        for j in 0..np {
            for i in 0..np {
                s += w[i] * w[j] * field.get(n, i, j, var);
            }
        }
        total += jac * s;
    }
    total
}

/// Integral of an analytic conserved-state function over the mesh with a
/// `points`-point LGL rule per element and direction.
pub fn integrate_function(
    mesh: &CartesianMesh,
    f: &dyn Fn(f64, f64, f64, &mut [f64]),
    t: f64,
    var: usize,
    num_vars: usize,
    points: usize,
) -> Result<f64> {
    let (x, w) = lgl_nodes_weights(points.max(2) - 1)?;
    let mut u = vec![0.0; num_vars];
    let mut total = 0.0;
    for n in 0..mesh.num_elements() {
        let mut s = 0.0;
        for j in 0..x.len() {
            for i in 0..x.len() {
                let (px, py) = mesh.map(n, x[i], x[j]);
                f(px, py, t, &mut u);
                s += w[i] * w[j] * u[var];
            }
        }
        total += mesh.jacobian() * s;
    }
    Ok(total)
}

/// `|reference_total - int u_var|`.
pub fn conservation_error(reference_total: f64, field: &SolutionField, var: usize) -> f64 {
    (reference_total - integrate(field, var)).abs()
}

/// Conservation error against an analytic solution, over-integrated with
/// `2N + 4` points per direction.
pub fn conservation_error_exact(
    field: &SolutionField,
    exact: &dyn Fn(f64, f64, f64, &mut [f64]),
    t: f64,
    var: usize,
) -> Result<f64> {
    let points = 2 * field.reference().degree() + 4;
    let reference = integrate_function(field.mesh(), exact, t, var, field.num_vars(), points)?;
    Ok(conservation_error(reference, field, var))
}

/// Errors of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    /// Elements per direction.
    pub elements: usize,
    /// Nodal maximum error per variable (empty without an exact solution).
    pub linf: Vec<f64>,
    /// Conservation error per conserved variable (`None` for variables
    /// that are not conserved).
    pub cons: Vec<Option<f64>>,
}

/// One row of a convergence table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EocRow {
    pub elements: usize,
    pub error: f64,
    pub cons: f64,
    pub eoc: Option<f64>,
}

/// `log(e_a / e_b) / log(n_b / n_a)` for consecutive levels with `n` elements per direction.
pub fn eoc(n_a: usize, e_a: f64, n_b: usize, e_b: f64) -> f64 {
    (e_a / e_b).ln() / (n_b as f64 / n_a as f64).ln()
}

/// Builds a convergence table from `(elements per direction, error, conservation error)`.
pub fn eoc_table(levels: &[(usize, f64, f64)]) -> Result<Vec<EocRow>> {
    if levels.len() < 2 {
        return Err(Error::config("a convergence table needs at least two levels"));
    }
    if levels.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::config("mesh levels must be strictly increasing"));
    }
    Ok(levels
        .iter()
        .enumerate()
        .map(|(r, &(elements, error, cons))| EocRow {
            elements,
            error,
            cons,
            eoc: (r > 0).then(|| eoc(levels[r - 1].0, levels[r - 1].1, elements, error)),
        })
        .collect())
}

/// Aligned text table in the layout `N_Q | eps_inf | EOC | eps_cons`.
pub fn format_eoc_table(title: &str, rows: &[EocRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{title}");
    let _ = writeln!(s, "{:>8}  {:>12}  {:>6}  {:>12}", "N_Q", "eps_inf", "EOC", "eps_cons");
    for r in rows {
        let nq = format!("{}^2", r.elements);
        let eoc = r.eoc.map_or("---".to_string(), |e| format!("{e:.2}"));
        let _ = writeln!(s, "{nq:>8}  {:>12.3e}  {eoc:>6}  {:>12.3e}", r.error, r.cons);
    }
    s
}

pub fn eoc_table_csv(rows: &[EocRow]) -> String {
    let mut s = String::from("elements_per_direction,eps_inf,eoc,eps_cons\n");
    for r in rows {
        let eoc = r.eoc.map_or(String::new(), |e| format!("{e:.17e}"));
        let _ = writeln!(s, "{},{:.17e},{},{:.17e}", r.elements, r.error, eoc, r.cons);
    }
    s
}
