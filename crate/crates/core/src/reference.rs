//! Single-element polynomial machinery on the reference interval [-1, 1]:
//! Legendre-Gauss-Lobatto nodes and weights, Lagrange basis evaluation and
//! the nodal differentiation matrix.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

/// LGL nodes, weights and differentiation matrix for polynomial degree `N`.
#[derive(Debug, Clone)]
pub struct ReferenceElement {
    degree: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    diff: DMatrix<f64>,
}

impl ReferenceElement {
    pub fn new(degree: usize) -> Result<Self> {
        let (nodes, weights) = lgl_nodes_weights(degree)?;
        let diff = diff_matrix(&nodes);
        Ok(Self { degree, nodes, weights, diff })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of nodes per direction, `N + 1`.
    pub fn num_nodes(&self) -> usize {
        self.degree + 1
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `D[(i, j)] = psi_j'(xi_i)`.
    pub fn diff_matrix(&self) -> &DMatrix<f64> {
        &self.diff
    }

    pub fn lagrange(&self, j: usize, x: f64) -> f64 {
        lagrange_eval(&self.nodes, j, x)
    }

    /// Values of all basis functions at `x`.
    pub fn lagrange_all(&self, x: f64) -> Vec<f64> {
        (0..self.nodes.len()).map(|j| lagrange_eval(&self.nodes, j, x)).collect()
    }

    /// Evaluates the interpolant through `values` (nodal coefficients) at `x`.
    pub fn interpolate(&self, values: &[f64], x: f64) -> f64 {
        debug_assert_eq!(values.len(), self.nodes.len());
        values
            .iter()
            .enumerate()
            .map(|(j, v)| v * lagrange_eval(&self.nodes, j, x))
            .sum()
    }
}

/// Legendre polynomial `L_n(x)` and its derivative via the three-term recurrence.
pub fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut l_prev, mut l) = (1.0, x);
    let (mut d_prev, mut d) = (0.0, 1.0);
    for k in 2..=n {
        let kf = k as f64;
        let l_next = ((2.0 * kf - 1.0) * x * l - (kf - 1.0) * l_prev) / kf;
        let d_next = d_prev + (2.0 * kf - 1.0) * l;
        l_prev = l;
        l = l_next;
        d_prev = d;
        d = d_next;
    }
    (l, d)
}

/// The `N + 1` roots of `(1 - x^2) L_N'(x)` and the matching quadrature weights.
///
/// Interior nodes are found by Newton iteration on `q = L_{N+1} - L_{N-1}`
/// (proportional to `(1 - x^2) L_N'`) started from Chebyshev-Gauss-Lobatto
/// points; symmetry is imposed by computing one half and mirroring.
pub fn lgl_nodes_weights(degree: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if degree == 0 {
        return Err(Error::config("LGL quadrature requires degree N >= 1"));
    }
    let n = degree;
    let nf = n as f64;
    let mut nodes = vec![0.0; n + 1];
    let mut weights = vec![0.0; n + 1];
    nodes[0] = -1.0;
    nodes[n] = 1.0;
    let end_weight = 2.0 / (nf * (nf + 1.0));
    weights[0] = end_weight;
    weights[n] = end_weight;

    for j in 1..(n + 1) / 2 {
        let mut x = -(PI * j as f64 / nf).cos();
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            let (q, dq) = lobatto_q(n, x);
            let delta = -q / dq;
            x += delta;
            if delta.abs() <= NEWTON_TOL * x.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NodeConvergence { degree: n, iterations: NEWTON_MAX_ITER });
        }
        let (l, _) = legendre_and_derivative(n, x);
        nodes[j] = x;
        nodes[n - j] = -x;
        weights[j] = end_weight / (l * l);
        weights[n - j] = weights[j];
    }
    if n % 2 == 0 {
        let (l, _) = legendre_and_derivative(n, 0.0);
        nodes[n / 2] = 0.0;
        weights[n / 2] = end_weight / (l * l);
    }
    Ok((nodes, weights))
}

// q(x) = L_{N+1}(x) - L_{N-1}(x) and q'(x).
fn lobatto_q(n: usize, x: f64) -> (f64, f64) {
    let (lp, dp) = legendre_and_derivative(n + 1, x);
    let (lm, dm) = legendre_and_derivative(n - 1, x);
    (lp - lm, dp - dm)
}

/// Lagrange basis function `psi_j(x)` in product form. Valid for any real `x`,
/// including points outside [-1, 1].
pub fn lagrange_eval(nodes: &[f64], j: usize, x: f64) -> f64 {
    let xj = nodes[j];
    nodes
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != j)
        .map(|(_, &xi)| (x - xi) / (xj - xi))
        .product()
}

/// Barycentric weights `w_j = 1 / prod_{i != j} (x_j - x_i)`.
pub fn barycentric_weights(nodes: &[f64]) -> Vec<f64> {
    (0..nodes.len())
        .map(|j| {
            1.0 / nodes
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, &xi)| nodes[j] - xi)
                .product::<f64>()
        })
        .collect()
}

/// `psi_j(x)` via the first (modified Lagrange) barycentric formula
/// `l(x) w_j / (x - x_j)` with `l(x) = prod_k (x - x_k)`, which stays
/// accurate for points outside the node interval as well.
pub fn lagrange_eval_barycentric(nodes: &[f64], bary: &[f64], j: usize, x: f64) -> f64 {
    if let Some(k) = nodes.iter().position(|&xk| xk == x) {
        return if k == j { 1.0 } else { 0.0 };
    }
    let ell: f64 = nodes.iter().map(|&xk| x - xk).product();
    ell * bary[j] / (x - nodes[j])
}

/// Nodal differentiation matrix `D[(i, j)] = psi_j'(x_i)`.
///
/// Off-diagonal entries use the barycentric formula; the diagonal is fixed by
/// the negative-sum trick so every row annihilates constants.
pub fn diff_matrix(nodes: &[f64]) -> DMatrix<f64> {
    let n = nodes.len();
    let bary = barycentric_weights(nodes);
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        let mut row_sum = 0.0;
        for j in 0..n {
            if i != j {
                let v = bary[j] / bary[i] / (nodes[i] - nodes[j]);
                d[(i, j)] = v;
                row_sum += v;
            }
        }
        d[(i, i)] = -row_sum;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn two_point_rule() {
        let (x, w) = lgl_nodes_weights(1).unwrap();
        assert_eq!(x, vec![-1.0, 1.0]);
        assert_eq!(w, vec![1.0, 1.0]);
    }

    #[test]
    fn three_point_rule_is_simpson() {
        let (x, w) = lgl_nodes_weights(2).unwrap();
        assert_abs_diff_eq!(x[0], -1.0);
        assert_abs_diff_eq!(x[1], 0.0);
        assert_abs_diff_eq!(x[2], 1.0);
        assert_abs_diff_eq!(w[0], 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(w[1], 4.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(w[2], 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn degree_zero_is_rejected() {
        assert!(lgl_nodes_weights(0).is_err());
    }

    #[test]
    fn monomials_integrated_exactly_for_degree_seven() {
        let (x, w) = lgl_nodes_weights(7).unwrap();
        for k in 0..=13 {
            let q: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(k)).sum();
            let exact = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            assert_abs_diff_eq!(q, exact, epsilon = 1e-14);
        }
    }

    #[test]
    fn high_degree_nodes_converge_and_are_sorted() {
        for n in 1..=30 {
            let (x, w) = lgl_nodes_weights(n).unwrap();
            assert!(x.windows(2).all(|p| p[0] < p[1]), "N = {n}");
            assert_abs_diff_eq!(w.iter().sum::<f64>(), 2.0, epsilon = 1e-13);
            for i in 0..=n {
                assert_abs_diff_eq!(x[i], -x[n - i], epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn kronecker_and_partition_of_unity() {
        let re = ReferenceElement::new(6).unwrap();
        for j in 0..=6 {
            for i in 0..=6 {
                let v = re.lagrange(j, re.nodes()[i]);
                assert_abs_diff_eq!(v, if i == j { 1.0 } else { 0.0 }, epsilon = 1e-14);
            }
        }
        assert_abs_diff_eq!(re.lagrange_all(0.37).iter().sum::<f64>(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn differentiation_matrix_basics() {
        let re = ReferenceElement::new(7).unwrap();
        let d = re.diff_matrix();
        let x = re.nodes();
        let ones = nalgebra::DVector::from_element(8, 1.0);
        let lin = nalgebra::DVector::from_column_slice(x);
        let dc = d * &ones;
        let dl = d * &lin;
        for i in 0..8 {
            assert_abs_diff_eq!(dc[i], 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(dl[i], 1.0, epsilon = 1e-12);
        }
        let pow = nalgebra::DVector::from_iterator(8, x.iter().map(|v| v.powi(7)));
        let dp = d * pow;
        for i in 0..8 {
            assert_abs_diff_eq!(dp[i], 7.0 * x[i].powi(6), epsilon = 1e-11);
        }
    }
}
