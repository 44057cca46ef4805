use super::{Direction, PhysicsSystem};

/// 2D compressible Euler equations, conserved variables `(rho, rho v1, rho v2, rho e)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Euler {
    pub gamma: f64,
}

impl Euler {
    pub fn new(gamma: f64) -> Self {
        Self { gamma }
    }
}

impl PhysicsSystem for Euler {
    fn num_vars(&self) -> usize {
        4
    }

    fn gamma(&self) -> f64 {
        self.gamma
    }

    fn var_names(&self) -> &'static [&'static str] {
        &["rho", "rho_v1", "rho_v2", "rho_e"]
    }

    fn primitive_names(&self) -> &'static [&'static str] {
        &["rho", "v1", "v2", "p"]
    }

    #[inline]
    fn flux(&self, u: &[f64], dir: Direction, out: &mut [f64]) {
        let rho = u[0];
        let v1 = u[1] / rho;
        let v2 = u[2] / rho;
        let p = (self.gamma - 1.0) * (u[3] - 0.5 * rho * (v1 * v1 + v2 * v2));
        match dir {
            Direction::X => {
                out[0] = u[1];
                out[1] = u[1] * v1 + p;
                out[2] = u[1] * v2;
                out[3] = v1 * (u[3] + p);
            }
            Direction::Y => {
                out[0] = u[2];
                out[1] = u[2] * v1;
                out[2] = u[2] * v2 + p;
                out[3] = v2 * (u[3] + p);
            }
        }
    }

    #[inline]
    fn max_wave_speed(&self, u: &[f64], dir: Direction) -> f64 {
        let rho = u[0];
        let vn = match dir {
            Direction::X => u[1] / rho,
            Direction::Y => u[2] / rho,
        };
        let c = (self.gamma * self.pressure(u) / rho).sqrt();
        vn.abs() + c
    }

    #[inline]
    fn pressure(&self, u: &[f64]) -> f64 {
        (self.gamma - 1.0) * (u[3] - 0.5 * (u[1] * u[1] + u[2] * u[2]) / u[0])
    }

    fn to_primitive(&self, u: &[f64], out: &mut [f64]) {
        out[0] = u[0];
        out[1] = u[1] / u[0];
        out[2] = u[2] / u[0];
        out[3] = self.pressure(u);
    }

    fn to_conservative(&self, w: &[f64], out: &mut [f64]) {
        out[0] = w[0];
        out[1] = w[0] * w[1];
        out[2] = w[0] * w[2];
        out[3] = w[3] / (self.gamma - 1.0) + 0.5 * w[0] * (w[1] * w[1] + w[2] * w[2]);
    }

    fn reflect(&self, u: &[f64], dir: Direction, out: &mut [f64]) {
        out[..4].copy_from_slice(&u[..4]);
        match dir {
            Direction::X => out[1] = -u[1],
            Direction::Y => out[2] = -u[2],
        }
    }
}
