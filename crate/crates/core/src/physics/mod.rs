//! Conservation-law systems: analytic fluxes, wave-speed bounds, variable
//! conversions and the Lax-Friedrichs interface flux.

mod euler;
mod mhd;

pub use euler::Euler;
pub use mhd::{GlmSettings, IdealMhd};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest number of conserved variables of any system (MHD + GLM).
pub const MAX_VARS: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LaxFriedrichs {
    /// Dissipation scaled by the larger wave speed of the two traces.
    #[default]
    Local,
    /// Dissipation scaled by the grid-wide maximal wave speed.
    Global,
}

pub trait PhysicsSystem: Send + Sync {
    fn num_vars(&self) -> usize;

    fn gamma(&self) -> f64;

    fn var_names(&self) -> &'static [&'static str];

    fn primitive_names(&self) -> &'static [&'static str];

    /// Analytic flux in `dir`. No admissibility check.
    fn flux(&self, u: &[f64], dir: Direction, out: &mut [f64]);

    /// Upper bound of the spectral radius of the flux Jacobian in `dir`.
    fn max_wave_speed(&self, u: &[f64], dir: Direction) -> f64;

    fn pressure(&self, u: &[f64]) -> f64;

    fn density(&self, u: &[f64]) -> f64 {
        u[0]
    }

    fn to_primitive(&self, u: &[f64], out: &mut [f64]);

    fn to_conservative(&self, w: &[f64], out: &mut [f64]);

    /// Mirror state across a wall with normal along `dir`.
    fn reflect(&self, u: &[f64], dir: Direction, out: &mut [f64]);

    /// Variables that are physically conserved (diagnostics skip the rest).
    fn is_conserved(&self, _var: usize) -> bool {
        true
    }

    fn check_admissible(&self, u: &[f64]) -> Result<()> {
        let rho = self.density(u);
        if !(rho > 0.0) {
            return Err(Error::Admissibility { reason: "non-positive density", state: u.to_vec() });
        }
        let p = self.pressure(u);
        if !(p > 0.0) {
            return Err(Error::Admissibility { reason: "non-positive pressure", state: u.to_vec() });
        }
        Ok(())
    }

    /// Hook run before every time step with the current nodal data.
    fn prepare_step(&mut self, _data: &[f64]) {}

    /// Hook run after every completed time step (source terms, damping).
    fn post_step(&self, _data: &mut [f64], _dt: f64) {}
}

/// `1/2 (F(uL) + F(uR)) - 1/2 lambda (uR - uL)`, where `lambda` is the local
/// maximum wave speed or, for [`LaxFriedrichs::Global`], `global_speed`.
#[allow(clippy::too_many_arguments)]
pub fn lax_friedrichs_flux<P: PhysicsSystem + ?Sized>(
    physics: &P,
    ul: &[f64],
    ur: &[f64],
    dir: Direction,
    mode: LaxFriedrichs,
    global_speed: f64,
    out: &mut [f64],
) {
    let nv = physics.num_vars();
    let mut fl = [0.0; MAX_VARS];
    let mut fr = [0.0; MAX_VARS];
    physics.flux(ul, dir, &mut fl[..nv]);
    physics.flux(ur, dir, &mut fr[..nv]);
    let lambda = match mode {
        LaxFriedrichs::Local => physics.max_wave_speed(ul, dir).max(physics.max_wave_speed(ur, dir)),
        LaxFriedrichs::Global => global_speed,
    };
    for q in 0..nv {
        out[q] = 0.5 * (fl[q] + fr[q]) - 0.5 * lambda * (ur[q] - ul[q]);
    }
}

/// Checked flux evaluation for callers outside the solver loop.
pub fn checked_flux<P: PhysicsSystem + ?Sized>(physics: &P, u: &[f64], dir: Direction) -> Result<Vec<f64>> {
    physics.check_admissible(u)?;
    let mut out = vec![0.0; physics.num_vars()];
    physics.flux(u, dir, &mut out);
    Ok(out)
}

pub fn checked_wave_speed<P: PhysicsSystem + ?Sized>(physics: &P, u: &[f64], dir: Direction) -> Result<f64> {
    physics.check_admissible(u)?;
    Ok(physics.max_wave_speed(u, dir))
}

/// Primitive -> conservative with admissibility checks on the input.
pub fn primitive_to_conservative<P: PhysicsSystem + ?Sized>(physics: &P, w: &[f64]) -> Result<Vec<f64>> {
    let mut u = vec![0.0; physics.num_vars()];
    physics.to_conservative(w, &mut u);
    physics.check_admissible(&u)?;
    Ok(u)
}

pub fn conservative_to_primitive<P: PhysicsSystem + ?Sized>(physics: &P, u: &[f64]) -> Result<Vec<f64>> {
    physics.check_admissible(u)?;
    let mut w = vec![0.0; physics.num_vars()];
    physics.to_primitive(u, &mut w);
    Ok(w)
}
