use rayon::prelude::*;

use super::MultiElementFilter;
use crate::dg::boundary::{ghost_value, Boundaries, BoundaryCondition, Side};
use crate::dg::{CartesianMesh, SolutionField};
use crate::error::Result;
use crate::physics::Direction;

/// Applies a [`MultiElementFilter`] to whole fields: an x-pass over a frozen
/// copy of the input followed by a y-pass over the frozen x-pass output.
/// Non-periodic sides are closed with ghost elements.
#[derive(Debug, Clone)]
pub struct FieldFilter {
    filter: MultiElementFilter,
    boundaries: Boundaries,
    mesh: CartesianMesh,
    nodes: Vec<f64>,
    num_vars: usize,
    intermediate: Vec<f64>,
}

impl FieldFilter {
    pub fn new(
        filter: MultiElementFilter,
        mesh: CartesianMesh,
        nodes: &[f64],
        num_vars: usize,
        boundaries: Boundaries,
    ) -> Result<Self> {
        boundaries.validate()?;
        let np = filter.num_nodes();
        assert_eq!(nodes.len(), np, "filter and field use different polynomial degrees");
        Ok(Self {
            intermediate: vec![0.0; mesh.num_elements() * np * np * num_vars],
            filter,
            boundaries,
            mesh,
            nodes: nodes.to_vec(),
            num_vars,
        })
    }

    pub fn filter(&self) -> &MultiElementFilter {
        &self.filter
    }

    /// Full x-then-y filter of `input` into `output`.
    pub fn apply(&mut self, input: &[f64], t: f64, output: &mut [f64]) -> Result<()> {
        let mut tmp = std::mem::take(&mut self.intermediate);
        self.pass(Direction::X, input, t, &mut tmp);
        self.pass(Direction::Y, &tmp, t, output);
        self.intermediate = tmp;
        Ok(())
    }

    /// One directional pass. Every element reads only from `input`, so the
    /// result is independent of element order.
    pub fn pass(&self, dir: Direction, input: &[f64], t: f64, output: &mut [f64]) {
        let np = self.nodes.len();
        let nv = self.num_vars;
        let elem_len = np * np * nv;
        assert_eq!(input.len(), self.mesh.num_elements() * elem_len);
        assert_eq!(output.len(), input.len());
        let mesh = self.mesh;
        let (line_stride, node_stride) = match dir {
            Direction::X => (np * nv, nv),
            Direction::Y => (nv, np * nv),
        };
        output.par_chunks_mut(elem_len).enumerate().for_each_init(
            || (vec![0.0; elem_len], vec![0.0; elem_len]),
            |(ghost_lo, ghost_hi), (n, out)| {
                let (ex, ey) = mesh.element_coords(n);
                let center = &input[n * elem_len..(n + 1) * elem_len];
                let (pos, count, periodic) = match dir {
                    Direction::X => (ex, mesh.nx, self.boundaries.periodic_x()),
                    Direction::Y => (ey, mesh.ny, self.boundaries.periodic_y()),
                };
                let neighbour = |p: usize| match dir {
                    Direction::X => mesh.element_index(p, ey),
                    Direction::Y => mesh.element_index(ex, p),
                };
                let lo: &[f64] = if pos > 0 {
                    let m = neighbour(pos - 1);
                    &input[m * elem_len..(m + 1) * elem_len]
                } else if periodic {
                    let m = neighbour(count - 1);
                    &input[m * elem_len..(m + 1) * elem_len]
                } else {
                    let side = if dir == Direction::X { Side::Left } else { Side::Bottom };
                    self.fill_ghost(side, n, center, t, ghost_lo);
                    ghost_lo
                };
                let hi: &[f64] = if pos + 1 < count {
                    let m = neighbour(pos + 1);
                    &input[m * elem_len..(m + 1) * elem_len]
                } else if periodic {
                    let m = neighbour(0);
                    &input[m * elem_len..(m + 1) * elem_len]
                } else {
                    let side = if dir == Direction::X { Side::Right } else { Side::Top };
                    self.fill_ghost(side, n, center, t, ghost_hi);
                    ghost_hi
                };
                for line in 0..np {
                    let b = line * line_stride;
                    self.filter.apply_strided(
                        &lo[b..],
                        &center[b..],
                        &hi[b..],
                        node_stride,
                        nv,
                        &mut out[b..],
                        node_stride,
                    );
                }
            },
        );
    }

    /// Ghost element beyond `side` of boundary element `n`: prescribed data
    /// at the ghost nodes for Dirichlet segments, otherwise the adjacent
    /// boundary-node value repeated along the normal.
    fn fill_ghost(&self, side: Side, n: usize, center: &[f64], t: f64, ghost: &mut [f64]) {
        let np = self.nodes.len();
        let nv = self.num_vars;
        let mesh = &self.mesh;
        let (x0, y0) = mesh.element_origin(n);
        let (gx0, gy0) = match side {
            Side::Left => (x0 - mesh.dx, y0),
            Side::Right => (x0 + mesh.dx, y0),
            Side::Bottom => (x0, y0 - mesh.dy),
            Side::Top => (x0, y0 + mesh.dy),
        };
        let bc: &BoundaryCondition = self.boundaries.side(side);
        for j in 0..np {
            for i in 0..np {
                let x = gx0 + 0.5 * (self.nodes[i] + 1.0) * mesh.dx;
                let y = gy0 + 0.5 * (self.nodes[j] + 1.0) * mesh.dy;
                let (bi, bj) = match side {
                    Side::Left => (0, j),
                    Side::Right => (np - 1, j),
                    Side::Bottom => (i, 0),
                    Side::Top => (i, np - 1),
                };
                let b = (bj * np + bi) * nv;
                let g = (j * np + i) * nv;
                ghost_value(bc, &center[b..b + nv], side, x, y, t, &mut ghost[g..g + nv]);
            }
        }
    }
}

/// Convenience wrapper returning a filtered copy of `field`.
pub fn filter_field_2d(
    filter: &MultiElementFilter,
    field: &SolutionField,
    boundaries: &Boundaries,
    t: f64,
) -> Result<SolutionField> {
    let mut ff = FieldFilter::new(
        filter.clone(),
        *field.mesh(),
        field.reference().nodes(),
        field.num_vars(),
        boundaries.clone(),
    )?;
    let mut out = vec![0.0; field.data().len()];
    ff.apply(field.data(), t, &mut out)?;
    Ok(field.with_data(out))
}
