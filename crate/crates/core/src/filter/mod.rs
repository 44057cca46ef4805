//! Multi-element SIAC Dirac-delta filter: matrix assembly, the dimension-by-
//! dimension 2D application with ghost elements, and adaptive blending.

mod adaptive;
mod field;

pub use adaptive::{
    blend, blend_factor, normalized_threshold_check, shock_indicator, AdaptiveFilter, AdaptiveFilterSettings,
    FilterMode, IndicatorVariable, LambdaFormula,
};
pub use field::{filter_field_2d, FieldFilter};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::kernel::DeltaKernel;
use crate::reference::{lgl_nodes_weights, ReferenceElement};

/// The three `(N+1) x (N+1)` blocks `(Phi^{n-1} | Phi^n | Phi^{n+1})` acting
/// on the left neighbour, the element itself and the right neighbour.
#[derive(Debug, Clone)]
pub struct MultiElementFilter {
    kernel: DeltaKernel,
    phi_left: DMatrix<f64>,
    phi_center: DMatrix<f64>,
    phi_right: DMatrix<f64>,
    // row-major copies for the hot loops
    rows_left: Vec<f64>,
    rows_center: Vec<f64>,
    rows_right: Vec<f64>,
    left_active: Vec<bool>,
    right_active: Vec<bool>,
}

/// LGL points used for the filter integrals: the `N* + 1` point rule, raised
/// when needed so that `psi_j * delta` (degree `N + m + 2k + 2`) is integrated
/// exactly.
pub fn filter_quadrature_points(degree: usize, kernel: &DeltaKernel) -> usize {
    let exact = (degree + kernel.degree() + 4) / 2;
    (kernel.n_star() + 1).max(exact)
}

/// `int_a^b psi_j(tau + shift) delta(xi - tau) dtau` for every `j`, by an
/// LGL rule mapped onto `[a, b]`.
fn integrate_row(
    reference: &ReferenceElement,
    kernel: &DeltaKernel,
    rule: &(Vec<f64>, Vec<f64>),
    xi: f64,
    (a, b): (f64, f64),
    shift: f64,
    out: &mut [f64],
) {
    out.fill(0.0);
    if b <= a {
        return;
    }
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    for (&x, &w) in rule.0.iter().zip(&rule.1) {
        let tau = mid + half * x;
        let d = kernel.delta(xi - tau) * half * w;
        if d == 0.0 {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            *o += d * reference.lagrange(j, tau + shift);
        }
    }
}

/// Single-domain filter matrix `Phi_ij = int_{xi_i - eps}^{xi_i + eps} psi_j(tau) delta(xi_i - tau) dtau`,
/// with the Lagrange basis continued polynomially outside `[-1, 1]`.
pub fn build_single_element_matrix(reference: &ReferenceElement, kernel: &DeltaKernel) -> Result<DMatrix<f64>> {
    let np = reference.num_nodes();
    let rule = lgl_nodes_weights(filter_quadrature_points(reference.degree(), kernel) - 1)?;
    let eps = kernel.epsilon();
    let mut phi = DMatrix::zeros(np, np);
    let mut row = vec![0.0; np];
    for (i, &xi) in reference.nodes().iter().enumerate() {
        integrate_row(reference, kernel, &rule, xi, (xi - eps, xi + eps), 0.0, &mut row);
        for j in 0..np {
            phi[(i, j)] = row[j];
        }
    }
    Ok(phi)
}

impl MultiElementFilter {
    pub fn build(reference: &ReferenceElement, kernel: DeltaKernel) -> Result<Self> {
        let points = filter_quadrature_points(reference.degree(), &kernel);
        Self::build_with_points(reference, kernel, points)
    }

    /// Assembly with an explicit number of LGL points per integration set.
    pub fn build_with_points(reference: &ReferenceElement, kernel: DeltaKernel, points: usize) -> Result<Self> {
        let eps = kernel.epsilon();
        if !(eps > 0.0 && eps <= 2.0) {
            return Err(Error::config(format!(
                "support width {eps} exceeds two reference elements; the stencil must fit the neighbours"
            )));
        }
        if points < 2 {
            return Err(Error::config("filter quadrature needs at least two points"));
        }
        let np = reference.num_nodes();
        let rule = lgl_nodes_weights(points - 1)?;
        let mut phi_left = DMatrix::zeros(np, np);
        let mut phi_center = DMatrix::zeros(np, np);
        let mut phi_right = DMatrix::zeros(np, np);
        let mut row = vec![0.0; np];
        for (i, &xi) in reference.nodes().iter().enumerate() {
            let (lo, hi) = (xi - eps, xi + eps);
            integrate_row(reference, &kernel, &rule, xi, (lo.max(-1.0), hi.min(1.0)), 0.0, &mut row);
            phi_center.row_mut(i).copy_from(&nalgebra::RowDVector::from_row_slice(&row));
            // left neighbour: tau in [xi - eps, -1] is local coordinate tau + 2 there
            integrate_row(reference, &kernel, &rule, xi, (lo, -1.0), 2.0, &mut row);
            phi_left.row_mut(i).copy_from(&nalgebra::RowDVector::from_row_slice(&row));
            integrate_row(reference, &kernel, &rule, xi, (1.0, hi), -2.0, &mut row);
            phi_right.row_mut(i).copy_from(&nalgebra::RowDVector::from_row_slice(&row));
        }
        let row_major = |m: &DMatrix<f64>| (0..np * np).map(|k| m[(k / np, k % np)]).collect::<Vec<_>>();
        let active = |m: &DMatrix<f64>| (0..np).map(|i| m.row(i).iter().any(|&v| v != 0.0)).collect::<Vec<_>>();
        Ok(Self {
            rows_left: row_major(&phi_left),
            rows_center: row_major(&phi_center),
            rows_right: row_major(&phi_right),
            left_active: active(&phi_left),
            right_active: active(&phi_right),
            kernel,
            phi_left,
            phi_center,
            phi_right,
        })
    }

    pub fn kernel(&self) -> &DeltaKernel {
        &self.kernel
    }

    pub fn num_nodes(&self) -> usize {
        self.phi_center.nrows()
    }

    pub fn phi_left(&self) -> &DMatrix<f64> {
        &self.phi_left
    }

    pub fn phi_center(&self) -> &DMatrix<f64> {
        &self.phi_center
    }

    pub fn phi_right(&self) -> &DMatrix<f64> {
        &self.phi_right
    }

    /// `Phi^{n-1} u_left + Phi^n u_center + Phi^{n+1} u_right`.
    pub fn filter_element_1d(&self, left: &[f64], center: &[f64], right: &[f64]) -> Vec<f64> {
        let np = self.num_nodes();
        let mut out = vec![0.0; np];
        self.apply_strided(left, center, right, 1, 1, &mut out, 1);
        out
    }

    /// Strided 1D application: node `l` of an input line is at `l * stride`,
    /// `nv` interleaved variables; output node `i` is written at `i * out_stride`.
    #[inline]
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn apply_strided(
        &self,
        left: &[f64],
        center: &[f64],
        right: &[f64],
        stride: usize,
        nv: usize,
        out: &mut [f64],
        out_stride: usize,
    ) {
        let np = self.num_nodes();
        for i in 0..np {
            let o = &mut out[i * out_stride..i * out_stride + nv];
            o.fill(0.0);
            let rc = &self.rows_center[i * np..(i + 1) * np];
            for (l, &w) in rc.iter().enumerate() {
                if w != 0.0 {
                    let s = &center[l * stride..l * stride + nv];
                    o.iter_mut().zip(s).for_each(|(a, b)| *a += w * b);
                }
            }
            if self.left_active[i] {
                for (l, &w) in self.rows_left[i * np..(i + 1) * np].iter().enumerate() {
                    let s = &left[l * stride..l * stride + nv];
                    o.iter_mut().zip(s).for_each(|(a, b)| *a += w * b);
                }
            }
            if self.right_active[i] {
                for (l, &w) in self.rows_right[i * np..(i + 1) * np].iter().enumerate() {
                    let s = &right[l * stride..l * stride + nv];
                    o.iter_mut().zip(s).for_each(|(a, b)| *a += w * b);
                }
            }
        }
    }
}
