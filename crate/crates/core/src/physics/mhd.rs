use serde::{Deserialize, Serialize};

use super::{Direction, PhysicsSystem};

/// Generalized Lagrange multiplier divergence cleaning parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GlmSettings {
    pub enabled: bool,
    /// Apply the parabolic decay `psi *= exp(-dt c_h / c_r)` after each step.
    pub damping: bool,
    /// `c_r = c_p^2 / c_h`.
    pub c_r: f64,
}

impl Default for GlmSettings {
    fn default() -> Self {
        Self { enabled: true, damping: true, c_r: 0.18 }
    }
}

/// 2D ideal MHD (three velocity and field components) with GLM cleaning.
/// Conserved variables `(rho, rho v1, rho v2, rho v3, rho e, B1, B2, B3, psi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdealMhd {
    pub gamma: f64,
    pub glm: GlmSettings,
    /// Cleaning speed, refreshed by [`PhysicsSystem::prepare_step`].
    pub c_h: f64,
}

impl IdealMhd {
    pub fn new(gamma: f64, glm: GlmSettings) -> Self {
        Self { gamma, glm, c_h: 0.0 }
    }

    /// `|v_n| + c_f` without the cleaning wave.
    #[inline]
    pub fn fluid_wave_speed(&self, u: &[f64], dir: Direction) -> f64 {
        let rho = u[0];
        let (vn, bn) = match dir {
            Direction::X => (u[1] / rho, u[5]),
            Direction::Y => (u[2] / rho, u[6]),
        };
        vn.abs() + self.fast_speed(u, bn)
    }

    #[inline]
    fn fast_speed(&self, u: &[f64], bn: f64) -> f64 {
        let rho = u[0];
        let a2 = self.gamma * self.pressure(u) / rho;
        let b2 = (u[5] * u[5] + u[6] * u[6] + u[7] * u[7]) / rho;
        let bn2 = bn * bn / rho;
        let s = a2 + b2;
        let disc = (s * s - 4.0 * a2 * bn2).max(0.0);
        (0.5 * (s + disc.sqrt())).sqrt()
    }

    /// Grid-maximal fluid wave speed over all nodes of `data` (9 values per node).
    pub fn cleaning_speed(&self, data: &[f64]) -> f64 {
        data.chunks_exact(9).fold(0.0_f64, |acc, u| {
            acc.max(self.fluid_wave_speed(u, Direction::X))
                .max(self.fluid_wave_speed(u, Direction::Y))
        })
    }
}

impl PhysicsSystem for IdealMhd {
    fn num_vars(&self) -> usize {
        9
    }

    fn gamma(&self) -> f64 {
        self.gamma
    }

    fn var_names(&self) -> &'static [&'static str] {
        &["rho", "rho_v1", "rho_v2", "rho_v3", "rho_e", "B1", "B2", "B3", "psi"]
    }

    fn primitive_names(&self) -> &'static [&'static str] {
        &["rho", "v1", "v2", "v3", "p", "B1", "B2", "B3", "psi"]
    }

    #[inline]
    fn flux(&self, u: &[f64], dir: Direction, out: &mut [f64]) {
        let rho = u[0];
        let (v1, v2, v3) = (u[1] / rho, u[2] / rho, u[3] / rho);
        let (b1, b2, b3) = (u[5], u[6], u[7]);
        let psi = u[8];
        let bb = 0.5 * (b1 * b1 + b2 * b2 + b3 * b3);
        let p = (self.gamma - 1.0) * (u[4] - 0.5 * rho * (v1 * v1 + v2 * v2 + v3 * v3) - bb);
        let ptot = p + bb;
        let vb = v1 * b1 + v2 * b2 + v3 * b3;
        let ch2 = self.c_h * self.c_h;
        match dir {
            Direction::X => {
                out[0] = u[1];
                out[1] = u[1] * v1 + ptot - b1 * b1;
                out[2] = u[1] * v2 - b1 * b2;
                out[3] = u[1] * v3 - b1 * b3;
                out[4] = v1 * (u[4] + ptot) - b1 * vb;
                out[5] = psi;
                out[6] = v1 * b2 - v2 * b1;
                out[7] = v1 * b3 - v3 * b1;
                out[8] = ch2 * b1;
            }
            Direction::Y => {
                out[0] = u[2];
                out[1] = u[2] * v1 - b1 * b2;
                out[2] = u[2] * v2 + ptot - b2 * b2;
                out[3] = u[2] * v3 - b2 * b3;
                out[4] = v2 * (u[4] + ptot) - b2 * vb;
                out[5] = v2 * b1 - v1 * b2;
                out[6] = psi;
                out[7] = v2 * b3 - v3 * b2;
                out[8] = ch2 * b2;
            }
        }
    }

    #[inline]
    fn max_wave_speed(&self, u: &[f64], dir: Direction) -> f64 {
        self.fluid_wave_speed(u, dir).max(self.c_h)
    }

    #[inline]
    fn pressure(&self, u: &[f64]) -> f64 {
        let rho = u[0];
        let kin = 0.5 * (u[1] * u[1] + u[2] * u[2] + u[3] * u[3]) / rho;
        let mag = 0.5 * (u[5] * u[5] + u[6] * u[6] + u[7] * u[7]);
        (self.gamma - 1.0) * (u[4] - kin - mag)
    }

    fn to_primitive(&self, u: &[f64], out: &mut [f64]) {
        let rho = u[0];
        out[0] = rho;
        out[1] = u[1] / rho;
        out[2] = u[2] / rho;
        out[3] = u[3] / rho;
        out[4] = self.pressure(u);
        out[5..9].copy_from_slice(&u[5..9]);
    }

    fn to_conservative(&self, w: &[f64], out: &mut [f64]) {
        let rho = w[0];
        out[0] = rho;
        out[1] = rho * w[1];
        out[2] = rho * w[2];
        out[3] = rho * w[3];
        out[4] = w[4] / (self.gamma - 1.0)
            + 0.5 * rho * (w[1] * w[1] + w[2] * w[2] + w[3] * w[3])
            + 0.5 * (w[5] * w[5] + w[6] * w[6] + w[7] * w[7]);
        out[5..9].copy_from_slice(&w[5..9]);
    }

    /// Conducting wall: normal momentum and normal field are mirrored.
    fn reflect(&self, u: &[f64], dir: Direction, out: &mut [f64]) {
        out[..9].copy_from_slice(&u[..9]);
        match dir {
            Direction::X => {
                out[1] = -u[1];
                out[5] = -u[5];
            }
            Direction::Y => {
                out[2] = -u[2];
                out[6] = -u[6];
            }
        }
    }

    fn is_conserved(&self, var: usize) -> bool {
        var != 8
    }

    fn prepare_step(&mut self, data: &[f64]) {
        if self.glm.enabled {
            self.c_h = self.cleaning_speed(data);
        }
    }

    fn post_step(&self, data: &mut [f64], dt: f64) {
        if self.glm.enabled && self.glm.damping && self.c_h > 0.0 {
            let decay = (-dt * self.c_h / self.glm.c_r).exp();
            for u in data.chunks_exact_mut(9) {
                u[8] *= decay;
            }
        }
    }
}
