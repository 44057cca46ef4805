//! Strong-form DGSEM semi-discrete operator on a Cartesian mesh.

use std::sync::Arc;

use rayon::prelude::*;

use super::boundary::{apply_boundary_trace, Boundaries, Side};
use super::field::SolutionField;
use super::mesh::CartesianMesh;
use crate::error::{Error, Result};
use crate::physics::{lax_friedrichs_flux, Direction, LaxFriedrichs, PhysicsSystem, MAX_VARS};
use crate::reference::ReferenceElement;

/// Evaluates `du/dt = L(u, t)`.
///
/// Interface fluxes are computed once per face into face buffers and then
/// read by both neighbours with opposite signs, so the result does not depend
/// on the element evaluation order.
pub struct DgOperator {
    mesh: CartesianMesh,
    reference: Arc<ReferenceElement>,
    num_vars: usize,
    boundaries: Boundaries,
    flux_mode: LaxFriedrichs,
    // row-major copy of the differentiation matrix
    diff: Vec<f64>,
    inv_w_first: f64,
    inv_w_last: f64,
    // f* on x-faces: ((ey * (nx + 1) + face) * np + j) * nv + q
    x_faces: Vec<f64>,
    // g* on y-faces: ((face * nx + ex) * np + i) * nv + q
    y_faces: Vec<f64>,
}

impl DgOperator {
    pub fn new(field: &SolutionField, boundaries: Boundaries, flux_mode: LaxFriedrichs) -> Result<Self> {
        boundaries.validate()?;
        let reference = Arc::clone(field.reference_arc());
        let mesh = *field.mesh();
        let np = reference.num_nodes();
        let nv = field.num_vars();
        if nv > MAX_VARS {
            return Err(Error::config(format!("at most {MAX_VARS} variables are supported")));
        }
        let d = reference.diff_matrix();
        let diff = (0..np * np).map(|k| d[(k / np, k % np)]).collect();
        let w = reference.weights();
        Ok(Self {
            mesh,
            num_vars: nv,
            boundaries,
            flux_mode,
            diff,
            inv_w_first: 1.0 / w[0],
            inv_w_last: 1.0 / w[np - 1],
            x_faces: vec![0.0; mesh.ny * (mesh.nx + 1) * np * nv],
            y_faces: vec![0.0; (mesh.ny + 1) * mesh.nx * np * nv],
            reference,
        })
    }

    pub fn mesh(&self) -> &CartesianMesh {
        &self.mesh
    }

    pub fn boundaries(&self) -> &Boundaries {
        &self.boundaries
    }

    /// Interface flux buffer on x-faces (for inspection and tests).
    pub fn x_face_flux(&self, ey: usize, face: usize, j: usize) -> &[f64] {
        let np = self.reference.num_nodes();
        let s = ((ey * (self.mesh.nx + 1) + face) * np + j) * self.num_vars;
        &self.x_faces[s..s + self.num_vars]
    }

    pub fn y_face_flux(&self, ex: usize, face: usize, i: usize) -> &[f64] {
        let np = self.reference.num_nodes();
        let s = ((face * self.mesh.nx + ex) * np + i) * self.num_vars;
        &self.y_faces[s..s + self.num_vars]
    }

    pub fn rhs<P: PhysicsSystem>(&mut self, physics: &P, u: &[f64], t: f64, du: &mut [f64]) -> Result<()> {
        let np = self.reference.num_nodes();
        let nv = self.num_vars;
        let global_speed = match self.flux_mode {
            LaxFriedrichs::Local => 0.0,
            LaxFriedrichs::Global => u.chunks_exact(nv).fold(0.0_f64, |acc, s| {
                acc.max(physics.max_wave_speed(s, Direction::X)).max(physics.max_wave_speed(s, Direction::Y))
            }),
        };
        self.compute_x_faces(physics, u, t, global_speed)?;
        self.compute_y_faces(physics, u, t, global_speed)?;

        let elem_len = np * np * nv;
        let mesh = self.mesh;
        let diff = &self.diff;
        let x_faces = &self.x_faces;
        let y_faces = &self.y_faces;
        let (inv_w0, inv_wn) = (self.inv_w_first, self.inv_w_last);
        let (sx, sy) = (2.0 / mesh.dx, 2.0 / mesh.dy);

        du.par_chunks_mut(elem_len)
            .enumerate()
            .try_for_each_init(
                || (vec![0.0; elem_len], vec![0.0; elem_len]),
                |(fx, fy), (n, out)| -> Result<()> {
                    let el = &u[n * elem_len..(n + 1) * elem_len];
                    for k in 0..np * np {
                        let s = &el[k * nv..(k + 1) * nv];
                        physics.check_admissible(s).map_err(|e| Error::AtNode {
                            element: n,
                            i: k % np,
                            j: k / np,
                            source: Box::new(e),
                        })?;
                        physics.flux(s, Direction::X, &mut fx[k * nv..(k + 1) * nv]);
                        physics.flux(s, Direction::Y, &mut fy[k * nv..(k + 1) * nv]);
                    }
                    let (ex, ey) = mesh.element_coords(n);
                    let xf_left = ((ey * (mesh.nx + 1) + ex) * np) * nv;
                    let xf_right = ((ey * (mesh.nx + 1) + ex + 1) * np) * nv;
                    let yf_bottom = ((ey * mesh.nx + ex) * np) * nv;
                    let yf_top = (((ey + 1) * mesh.nx + ex) * np) * nv;
                    for j in 0..np {
                        for i in 0..np {
                            let node = (j * np + i) * nv;
                            for q in 0..nv {
                                let mut ax = 0.0;
                                let mut ay = 0.0;
                                for m in 0..np {
                                    ax += diff[i * np + m] * fx[(j * np + m) * nv + q];
                                    ay += diff[j * np + m] * fy[(m * np + i) * nv + q];
                                }
                                if i == np - 1 {
                                    ax += inv_wn * (x_faces[xf_right + j * nv + q] - fx[node + q]);
                                }
                                if i == 0 {
                                    ax -= inv_w0 * (x_faces[xf_left + j * nv + q] - fx[node + q]);
                                }
                                if j == np - 1 {
                                    ay += inv_wn * (y_faces[yf_top + i * nv + q] - fy[node + q]);
                                }
                                if j == 0 {
                                    ay -= inv_w0 * (y_faces[yf_bottom + i * nv + q] - fy[node + q]);
                                }
                                out[node + q] = -sx * ax - sy * ay;
                            }
                        }
                    }
                    Ok(())
                },
            )
    }

    fn compute_x_faces<P: PhysicsSystem>(&mut self, physics: &P, u: &[f64], t: f64, global_speed: f64) -> Result<()> {
        let np = self.reference.num_nodes();
        let nv = self.num_vars;
        let mesh = self.mesh;
        let nodes = self.reference.nodes();
        let elem_len = np * np * nv;
        let node_at = |n: usize, i: usize, j: usize| {
            let s = n * elem_len + (j * np + i) * nv;
            &u[s..s + nv]
        };
        let periodic = self.boundaries.periodic_x();
        let mut ext = [0.0; MAX_VARS];
        for ey in 0..mesh.ny {
            for face in 0..=mesh.nx {
                for j in 0..np {
                    let out_start = ((ey * (mesh.nx + 1) + face) * np + j) * nv;
                    let y = mesh.y_bottom + ey as f64 * mesh.dy + 0.5 * (nodes[j] + 1.0) * mesh.dy;
                    let (ul, ur): (&[f64], &[f64]) = if face > 0 && face < mesh.nx {
                        (
                            node_at(mesh.element_index(face - 1, ey), np - 1, j),
                            node_at(mesh.element_index(face, ey), 0, j),
                        )
                    } else if periodic {
                        (
                            node_at(mesh.element_index(mesh.nx - 1, ey), np - 1, j),
                            node_at(mesh.element_index(0, ey), 0, j),
                        )
                    } else if face == 0 {
                        let interior = node_at(mesh.element_index(0, ey), 0, j);
                        let bc = &self.boundaries.left;
                        apply_boundary_trace(bc, physics, interior, Side::Left, mesh.x_left, y, t, &mut ext);
                        check_exterior(physics, &ext[..nv])?;
                        (&ext[..nv], interior)
                    } else {
                        let interior = node_at(mesh.element_index(mesh.nx - 1, ey), np - 1, j);
                        let bc = &self.boundaries.right;
                        apply_boundary_trace(bc, physics, interior, Side::Right, mesh.x_right, y, t, &mut ext);
                        check_exterior(physics, &ext[..nv])?;
                        (interior, &ext[..nv])
                    };
                    let out = &mut self.x_faces[out_start..out_start + nv];
                    lax_friedrichs_flux(physics, ul, ur, Direction::X, self.flux_mode, global_speed, out);
                }
            }
        }
        Ok(())
    }

    fn compute_y_faces<P: PhysicsSystem>(&mut self, physics: &P, u: &[f64], t: f64, global_speed: f64) -> Result<()> {
        let np = self.reference.num_nodes();
        let nv = self.num_vars;
        let mesh = self.mesh;
        let nodes = self.reference.nodes();
        let elem_len = np * np * nv;
        let node_at = |n: usize, i: usize, j: usize| {
            let s = n * elem_len + (j * np + i) * nv;
            &u[s..s + nv]
        };
        let periodic = self.boundaries.periodic_y();
        let mut ext = [0.0; MAX_VARS];
        for face in 0..=mesh.ny {
            for ex in 0..mesh.nx {
                for i in 0..np {
                    let out_start = ((face * mesh.nx + ex) * np + i) * nv;
                    let x = mesh.x_left + ex as f64 * mesh.dx + 0.5 * (nodes[i] + 1.0) * mesh.dx;
                    let (ub, ut): (&[f64], &[f64]) = if face > 0 && face < mesh.ny {
                        (
                            node_at(mesh.element_index(ex, face - 1), i, np - 1),
                            node_at(mesh.element_index(ex, face), i, 0),
                        )
                    } else if periodic {
                        (
                            node_at(mesh.element_index(ex, mesh.ny - 1), i, np - 1),
                            node_at(mesh.element_index(ex, 0), i, 0),
                        )
                    } else if face == 0 {
                        let interior = node_at(mesh.element_index(ex, 0), i, 0);
                        let bc = &self.boundaries.bottom;
                        apply_boundary_trace(bc, physics, interior, Side::Bottom, x, mesh.y_bottom, t, &mut ext);
                        check_exterior(physics, &ext[..nv])?;
                        (&ext[..nv], interior)
                    } else {
                        let interior = node_at(mesh.element_index(ex, mesh.ny - 1), i, np - 1);
                        let bc = &self.boundaries.top;
                        apply_boundary_trace(bc, physics, interior, Side::Top, x, mesh.y_top, t, &mut ext);
                        check_exterior(physics, &ext[..nv])?;
                        (interior, &ext[..nv])
                    };
                    let out = &mut self.y_faces[out_start..out_start + nv];
                    lax_friedrichs_flux(physics, ub, ut, Direction::Y, self.flux_mode, global_speed, out);
                }
            }
        }
        Ok(())
    }
}

fn check_exterior<P: PhysicsSystem>(physics: &P, s: &[f64]) -> Result<()> {
    physics.check_admissible(s)
}
