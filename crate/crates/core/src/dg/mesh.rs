use crate::error::{Error, Result};

/// Uniform Cartesian mesh of `nx * ny` elements. Elements are numbered
/// row-major from the bottom-left corner: `n = ey * nx + ex`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartesianMesh {
    pub x_left: f64,
    pub x_right: f64,
    pub y_bottom: f64,
    pub y_top: f64,
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
}

impl CartesianMesh {
    pub fn new(x_bounds: (f64, f64), y_bounds: (f64, f64), nx: usize, ny: usize) -> Result<Self> {
        let (x_left, x_right) = x_bounds;
        let (y_bottom, y_top) = y_bounds;
        if nx == 0 || ny == 0 {
            return Err(Error::config("mesh needs at least one element per direction"));
        }
        if !(x_right > x_left && y_top > y_bottom) {
            return Err(Error::config("mesh bounds must be increasing"));
        }
        Ok(Self {
            x_left,
            x_right,
            y_bottom,
            y_top,
            nx,
            ny,
            dx: (x_right - x_left) / nx as f64,
            dy: (y_top - y_bottom) / ny as f64,
        })
    }

    pub fn num_elements(&self) -> usize {
        self.nx * self.ny
    }

    pub fn element_index(&self, ex: usize, ey: usize) -> usize {
        ey * self.nx + ex
    }

    pub fn element_coords(&self, n: usize) -> (usize, usize) {
        (n % self.nx, n / self.nx)
    }

    /// Lower-left corner `(x_{n,1}, y_{n,1})`.
    pub fn element_origin(&self, n: usize) -> (f64, f64) {
        let (ex, ey) = self.element_coords(n);
        (self.x_left + ex as f64 * self.dx, self.y_bottom + ey as f64 * self.dy)
    }

    /// `J = dx dy / 4`.
    pub fn jacobian(&self) -> f64 {
        0.25 * self.dx * self.dy
    }

    /// Physical position of reference point `(xi, eta)` in element `n`.
    pub fn map(&self, n: usize, xi: f64, eta: f64) -> (f64, f64) {
        let (x0, y0) = self.element_origin(n);
        (x0 + 0.5 * (xi + 1.0) * self.dx, y0 + 0.5 * (eta + 1.0) * self.dy)
    }

    /// Element containing `(x, y)` and the reference coordinates there.
    /// Points on interior interfaces resolve to the element on the upper side;
    /// the domain's upper edges resolve to the last element.
    pub fn locate(&self, x: f64, y: f64) -> (usize, f64, f64) {
        let fx = ((x - self.x_left) / self.dx).floor();
        let fy = ((y - self.y_bottom) / self.dy).floor();
        let ex = (fx.max(0.0) as usize).min(self.nx - 1);
        let ey = (fy.max(0.0) as usize).min(self.ny - 1);
        let n = self.element_index(ex, ey);
        let (x0, y0) = self.element_origin(n);
        (n, 2.0 * (x - x0) / self.dx - 1.0, 2.0 * (y - y0) / self.dy - 1.0)
    }
}
