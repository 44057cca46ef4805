//! Five-stage fourth-order low-storage Runge-Kutta (Carpenter-Kennedy) and
//! the CFL time-step rule.

use super::mesh::CartesianMesh;
use crate::error::{Error, Result};
use crate::physics::{Direction, PhysicsSystem};

pub const RK_A: [f64; 5] = [
    0.0,
    -567301805773.0 / 1357537059087.0,
    -2404267990393.0 / 2016746695238.0,
    -3550918686646.0 / 2091501179385.0,
    -1275806237668.0 / 842570457699.0,
];

pub const RK_B: [f64; 5] = [
    1432997174477.0 / 9575080441755.0,
    5161836677717.0 / 13612068292357.0,
    1720146321549.0 / 2090206949498.0,
    3134564353537.0 / 4481467310338.0,
    2277821191437.0 / 14882151754819.0,
];

pub const RK_C: [f64; 5] = [
    0.0,
    1432997174477.0 / 9575080441755.0,
    2526269341429.0 / 6820363183890.0,
    2006345519317.0 / 3224310063776.0,
    2802321613138.0 / 2924317926251.0,
];

/// Two-register scheme: `du <- A_s du + dt L(u, t + c_s dt)`, `u <- u + B_s du`.
#[derive(Debug, Clone)]
pub struct LowStorageRk {
    du: Vec<f64>,
    rhs: Vec<f64>,
}

impl LowStorageRk {
    pub fn new(len: usize) -> Self {
        Self { du: vec![0.0; len], rhs: vec![0.0; len] }
    }

    /// Advances `u` from `t` to `t + dt`.
    ///
    /// `block_len` groups values into elements so that a non-finite stage
    /// value can be attributed to an element.
    pub fn step<F>(&mut self, u: &mut [f64], t: f64, dt: f64, block_len: usize, mut operator: F) -> Result<()>
    where
        F: FnMut(&[f64], f64, &mut [f64]) -> Result<()>,
    {
        assert_eq!(u.len(), self.du.len());
        self.du.fill(0.0);
        for stage in 0..5 {
            operator(u, t + RK_C[stage] * dt, &mut self.rhs)?;
            let (a, b) = (RK_A[stage], RK_B[stage]);
            for ((du, k), ui) in self.du.iter_mut().zip(&self.rhs).zip(u.iter_mut()) {
                *du = a * *du + dt * k;
                *ui += b * *du;
            }
            if let Some(pos) = u.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { stage, element: pos / block_len.max(1) });
            }
        }
        Ok(())
    }
}

/// Largest directional wave speed over all nodes.
pub fn max_wave_speed<P: PhysicsSystem + ?Sized>(physics: &P, data: &[f64]) -> f64 {
    data.chunks_exact(physics.num_vars()).fold(0.0_f64, |acc, u| {
        acc.max(physics.max_wave_speed(u, Direction::X)).max(physics.max_wave_speed(u, Direction::Y))
    })
}

/// `dt = CFL min(dx, dy) / (lambda_max (2N + 1))`.
pub fn cfl_timestep<P: PhysicsSystem + ?Sized>(
    physics: &P,
    data: &[f64],
    mesh: &CartesianMesh,
    degree: usize,
    cfl: f64,
) -> Result<f64> {
    let lambda = max_wave_speed(physics, data);
    if !lambda.is_finite() {
        return Err(Error::NonFinite { stage: 0, element: 0 });
    }
    if lambda <= 0.0 {
        return Err(Error::config("maximal wave speed is zero, the CFL time step is undefined"));
    }
    Ok(cfl * mesh.dx.min(mesh.dy) / (lambda * (2 * degree + 1) as f64))
}
