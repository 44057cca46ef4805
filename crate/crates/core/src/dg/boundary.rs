use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::physics::{Direction, PhysicsSystem};

/// Conserved state as a function of `(x, y, t)`.
pub type StateFn = Arc<dyn Fn(f64, f64, f64, &mut [f64]) + Send + Sync>;

/// Position along a face as a function of time.
pub type ThresholdFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum BoundaryCondition {
    Periodic,
    Dirichlet(StateFn),
    Outflow,
    ReflectingWall,
    /// Conserved state `below` where the coordinate along the face is less
    /// than `threshold(t)`, `above` otherwise.
    PiecewiseDirichlet { threshold: ThresholdFn, below: Vec<f64>, above: Vec<f64> },
    /// Two conditions on one side, split at the along-face coordinate `at`.
    Split { at: f64, below: Box<BoundaryCondition>, above: Box<BoundaryCondition> },
}

impl fmt::Debug for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Periodic => write!(f, "Periodic"),
            Self::Dirichlet(_) => write!(f, "Dirichlet(..)"),
            Self::Outflow => write!(f, "Outflow"),
            Self::ReflectingWall => write!(f, "ReflectingWall"),
            Self::PiecewiseDirichlet { below, above, .. } => {
                write!(f, "PiecewiseDirichlet {{ below: {below:?}, above: {above:?} }}")
            }
            Self::Split { at, below, above } => {
                write!(f, "Split {{ at: {at}, below: {below:?}, above: {above:?} }}")
            }
        }
    }
}

impl BoundaryCondition {
    pub fn dirichlet_constant(state: Vec<f64>) -> Self {
        Self::Dirichlet(Arc::new(move |_, _, _, out: &mut [f64]| out.copy_from_slice(&state)))
    }

    fn resolve(&self, along: f64) -> &BoundaryCondition {
        match self {
            Self::Split { at, below, above } => {
                if along < *at {
                    below.resolve(along)
                } else {
                    above.resolve(along)
                }
            }
            other => other,
        }
    }

    fn contains_periodic(&self) -> bool {
        match self {
            Self::Periodic => true,
            Self::Split { below, above, .. } => below.contains_periodic() || above.contains_periodic(),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    Bottom,
    Top,
}

impl Side {
    pub fn normal_direction(self) -> Direction {
        match self {
            Side::Left | Side::Right => Direction::X,
            Side::Bottom | Side::Top => Direction::Y,
        }
    }

    fn along(self, x: f64, y: f64) -> f64 {
        match self {
            Side::Left | Side::Right => y,
            Side::Bottom | Side::Top => x,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Boundaries {
    pub left: BoundaryCondition,
    pub right: BoundaryCondition,
    pub bottom: BoundaryCondition,
    pub top: BoundaryCondition,
}

impl Boundaries {
    pub fn periodic() -> Self {
        Self::uniform(BoundaryCondition::Periodic)
    }

    pub fn uniform(bc: BoundaryCondition) -> Self {
        Self { left: bc.clone(), right: bc.clone(), bottom: bc.clone(), top: bc }
    }

    pub fn side(&self, side: Side) -> &BoundaryCondition {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
            Side::Bottom => &self.bottom,
            Side::Top => &self.top,
        }
    }

    pub fn periodic_x(&self) -> bool {
        matches!(self.left, BoundaryCondition::Periodic)
    }

    pub fn periodic_y(&self) -> bool {
        matches!(self.bottom, BoundaryCondition::Periodic)
    }

    /// Periodic sides must come in opposite pairs and cannot be split.
    pub fn validate(&self) -> Result<()> {
        let pair = |a: &BoundaryCondition, b: &BoundaryCondition, name: &str| {
            let pa = matches!(a, BoundaryCondition::Periodic);
            let pb = matches!(b, BoundaryCondition::Periodic);
            if pa != pb {
                return Err(Error::config(format!("periodic {name} boundary must be paired with its opposite side")));
            }
            if !pa && (a.contains_periodic() || b.contains_periodic()) {
                return Err(Error::config(format!("{name} boundary mixes periodic and non-periodic segments")));
            }
            Ok(())
        };
        pair(&self.left, &self.right, "x")?;
        pair(&self.bottom, &self.top, "y")
    }
}

/// Exterior trace seen by the interface flux at boundary point `(x, y)`.
#[allow(clippy::too_many_arguments)]
pub fn apply_boundary_trace<P: PhysicsSystem + ?Sized>(
    bc: &BoundaryCondition,
    physics: &P,
    interior: &[f64],
    side: Side,
    x: f64,
    y: f64,
    t: f64,
    out: &mut [f64],
) {
    let nv = physics.num_vars();
    match bc.resolve(side.along(x, y)) {
        BoundaryCondition::Dirichlet(f) => f(x, y, t, &mut out[..nv]),
        BoundaryCondition::PiecewiseDirichlet { threshold, below, above } => {
            let s = if side.along(x, y) < threshold(t) { below } else { above };
            out[..nv].copy_from_slice(s);
        }
        BoundaryCondition::ReflectingWall => physics.reflect(interior, side.normal_direction(), out),
        BoundaryCondition::Outflow | BoundaryCondition::Periodic | BoundaryCondition::Split { .. } => {
            out[..nv].copy_from_slice(&interior[..nv])
        }
    }
}

/// Ghost-element value at ghost node `(x, y)`: prescribed data for Dirichlet
/// types, otherwise the adjacent interior boundary-node value.
pub fn ghost_value(bc: &BoundaryCondition, boundary_value: &[f64], side: Side, x: f64, y: f64, t: f64, out: &mut [f64]) {
    let nv = boundary_value.len();
    match bc.resolve(side.along(x, y)) {
        BoundaryCondition::Dirichlet(f) => f(x, y, t, &mut out[..nv]),
        BoundaryCondition::PiecewiseDirichlet { threshold, below, above } => {
            let s = if side.along(x, y) < threshold(t) { below } else { above };
            out[..nv].copy_from_slice(s);
        }
        _ => out[..nv].copy_from_slice(boundary_value),
    }
}
