use std::sync::Arc;

use super::mesh::CartesianMesh;
use crate::reference::ReferenceElement;

/// Nodal coefficients `u^{Q_n}_{ij,q}` on every element of a Cartesian mesh.
///
/// Storage is element-major, then `j` (eta), then `i` (xi), then variable:
/// the state of one node is a contiguous slice of length `num_vars`.
#[derive(Debug, Clone)]
pub struct SolutionField {
    mesh: CartesianMesh,
    reference: Arc<ReferenceElement>,
    num_vars: usize,
    data: Vec<f64>,
}

impl SolutionField {
    pub fn zeros(mesh: CartesianMesh, reference: Arc<ReferenceElement>, num_vars: usize) -> Self {
        let np = reference.num_nodes();
        let data = vec![0.0; mesh.num_elements() * np * np * num_vars];
        Self { mesh, reference, num_vars, data }
    }

    /// Samples `f(x, y, out)` at every node.
    pub fn from_fn(
        mesh: CartesianMesh,
        reference: Arc<ReferenceElement>,
        num_vars: usize,
        mut f: impl FnMut(f64, f64, &mut [f64]),
    ) -> Self {
        let mut field = Self::zeros(mesh, reference, num_vars);
        let np = field.num_nodes();
        for n in 0..mesh.num_elements() {
            for j in 0..np {
                for i in 0..np {
                    let (x, y) = field.node_position(n, i, j);
                    f(x, y, field.node_mut(n, i, j));
                }
            }
        }
        field
    }

    pub fn mesh(&self) -> &CartesianMesh {
        &self.mesh
    }

    pub fn reference(&self) -> &ReferenceElement {
        &self.reference
    }

    pub fn reference_arc(&self) -> &Arc<ReferenceElement> {
        &self.reference
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Nodes per direction.
    pub fn num_nodes(&self) -> usize {
        self.reference.num_nodes()
    }

    /// Values stored per element.
    pub fn element_len(&self) -> usize {
        let np = self.num_nodes();
        np * np * self.num_vars
    }

    #[inline]
    pub fn index(&self, n: usize, i: usize, j: usize, q: usize) -> usize {
        let np = self.num_nodes();
        ((n * np + j) * np + i) * self.num_vars + q
    }

    pub fn node(&self, n: usize, i: usize, j: usize) -> &[f64] {
        let s = self.index(n, i, j, 0);
        &self.data[s..s + self.num_vars]
    }

    pub fn node_mut(&mut self, n: usize, i: usize, j: usize) -> &mut [f64] {
        let s = self.index(n, i, j, 0);
        let nv = self.num_vars;
        &mut self.data[s..s + nv]
    }

    pub fn element(&self, n: usize) -> &[f64] {
        let len = self.element_len();
        &self.data[n * len..(n + 1) * len]
    }

    pub fn element_mut(&mut self, n: usize) -> &mut [f64] {
        let len = self.element_len();
        &mut self.data[n * len..(n + 1) * len]
    }

    pub fn get(&self, n: usize, i: usize, j: usize, q: usize) -> f64 {
        self.data[self.index(n, i, j, q)]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn node_position(&self, n: usize, i: usize, j: usize) -> (f64, f64) {
        let x = self.reference.nodes();
        self.mesh.map(n, x[i], x[j])
    }

    /// Same layout, new values.
    pub fn with_data(&self, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), self.data.len());
        Self { data, ..self.clone_shape() }
    }

    fn clone_shape(&self) -> Self {
        Self {
            mesh: self.mesh,
            reference: Arc::clone(&self.reference),
            num_vars: self.num_vars,
            data: Vec::new(),
        }
    }

    /// Evaluates the element polynomial of variable `q` at physical `(x, y)`.
    pub fn evaluate(&self, x: f64, y: f64, q: usize) -> f64 {
        let (n, xi, eta) = self.mesh.locate(x, y);
        let lx = self.reference.lagrange_all(xi);
        let ly = self.reference.lagrange_all(eta);
        let np = self.num_nodes();
        let mut v = 0.0;
        for j in 0..np {
            for i in 0..np {
                v += lx[i] * ly[j] * self.get(n, i, j, q);
            }
        }
        v
    }

    /// All variables at physical `(x, y)`.
    pub fn evaluate_state(&self, x: f64, y: f64, out: &mut [f64]) {
        let (n, xi, eta) = self.mesh.locate(x, y);
        let lx = self.reference.lagrange_all(xi);
        let ly = self.reference.lagrange_all(eta);
        let np = self.num_nodes();
        out[..self.num_vars].fill(0.0);
        for j in 0..np {
            for i in 0..np {
                let w = lx[i] * ly[j];
                for (o, v) in out.iter_mut().zip(self.node(n, i, j)) {
                    *o += w * v;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn layout_and_evaluation() {
        let mesh = CartesianMesh::new((0.0, 2.0), (0.0, 1.0), 2, 3).unwrap();
        let re = Arc::new(ReferenceElement::new(3).unwrap());
        let f = SolutionField::from_fn(mesh, re, 2, |x, y, out| {
            out[0] = x * x + y;
            out[1] = x * y * y * y;
        });
        assert_eq!(f.data().len(), 6 * 16 * 2);
        assert_eq!(f.element_len(), 32);
        let (x, y) = f.node_position(4, 1, 2);
        assert_abs_diff_eq!(f.get(4, 1, 2, 0), x * x + y, epsilon = 1e-15);
        // degree <= 3 per direction is reproduced exactly
        assert_abs_diff_eq!(f.evaluate(1.37, 0.61, 0), 1.37 * 1.37 + 0.61, epsilon = 1e-13);
        assert_abs_diff_eq!(f.evaluate(0.2, 0.9, 1), 0.2 * 0.9_f64.powi(3), epsilon = 1e-13);
    }
}
