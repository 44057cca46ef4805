//! Benchmark problems: initial and boundary data, exact solutions where
//! known, and the default run parameters used for each figure.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dg::{BoundaryCondition, Boundaries};
use crate::error::{Error, Result};
use crate::filter::{FilterMode, IndicatorVariable};
use crate::physics::{Euler, GlmSettings, IdealMhd, PhysicsSystem};

/// Primitive state as a function of `(x, y)`.
pub type InitialFn = Arc<dyn Fn(f64, f64, &mut [f64]) + Send + Sync>;

/// Conserved state as a function of `(x, y, t)`.
pub type ExactFn = Arc<dyn Fn(f64, f64, f64, &mut [f64]) + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhysicsKind {
    Euler,
    Mhd,
}

/// Kernel support either from the bandwidth parameter `N_d` or given directly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupportSpec {
    ND(f64),
    Epsilon(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterDefaults {
    pub m: usize,
    pub k: usize,
    pub support: SupportSpec,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub indicator: IndicatorVariable,
    pub mode: FilterMode,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunDefaults {
    pub degree: usize,
    pub nx: usize,
    pub ny: usize,
    pub cfl: f64,
    pub t_end: f64,
    pub filter: Option<FilterDefaults>,
}

/// Post-shock state used for the double Mach reflection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DoubleMachState {
    /// Velocity `(8.25 pi/6, -8.25 pi/6)` exactly as published.
    #[default]
    Printed,
    /// Velocity `(8.25 cos(pi/6), -8.25 sin(pi/6))` of the Mach 10 shock inclined at 60 degrees.
    Standard,
}

/// Domain of the smooth convergence case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConvergenceDomain {
    /// `[-1, 1]^2`, as stated with the problem definition.
    #[default]
    Printed,
    /// `[0, 1]^2`: element size 1 for a single element, the scale on which
    /// the published error tables are reproduced level by level.
    Unit,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CaseOptions {
    pub double_mach_state: DoubleMachState,
    /// Smearing width of the initial double Mach shock (0 = sharp).
    pub double_mach_shock_width: f64,
    pub convergence_domain: ConvergenceDomain,
}

#[derive(Clone)]
pub struct TestCase {
    pub name: String,
    pub physics: PhysicsKind,
    pub gamma: f64,
    pub x_bounds: (f64, f64),
    pub y_bounds: (f64, f64),
    pub initial: InitialFn,
    pub exact: Option<ExactFn>,
    pub boundaries: Boundaries,
    pub defaults: RunDefaults,
}

impl fmt::Debug for TestCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestCase")
            .field("name", &self.name)
            .field("physics", &self.physics)
            .field("gamma", &self.gamma)
            .field("x_bounds", &self.x_bounds)
            .field("y_bounds", &self.y_bounds)
            .field("has_exact", &self.exact.is_some())
            .field("boundaries", &self.boundaries)
            .field("defaults", &self.defaults)
            .finish()
    }
}

/// Names accepted by [`TestCase::by_name`].
pub const CASE_NAMES: [&str; 8] = [
    "convergence",
    "explosion",
    "explosion-m3",
    "riemann-17",
    "riemann-19",
    "double-mach",
    "orszag-tang",
    "magnetic-rotor",
];

impl TestCase {
    pub fn by_name(name: &str, options: &CaseOptions) -> Result<Self> {
        match name {
            "convergence" => Ok(convergence_case_on(options.convergence_domain)),
            "explosion" => Ok(explosion_case()),
            "explosion-m3" => Ok(explosion_case_m3()),
            "riemann-17" => riemann_case(17),
            "riemann-19" => riemann_case(19),
            "double-mach" => Ok(double_mach_case_smeared(options.double_mach_state, options.double_mach_shock_width)),
            "orszag-tang" => Ok(orszag_tang_case()),
            "magnetic-rotor" => Ok(magnetic_rotor_case()),
            other => Err(Error::config(format!(
                "unknown case '{other}', expected one of {}",
                CASE_NAMES.join(", ")
            ))),
        }
    }

    pub fn num_vars(&self) -> usize {
        match self.physics {
            PhysicsKind::Euler => 4,
            PhysicsKind::Mhd => 9,
        }
    }

    /// Primitive -> conservative for this case's system.
    pub fn to_conservative(&self, w: &[f64], out: &mut [f64]) {
        match self.physics {
            PhysicsKind::Euler => Euler::new(self.gamma).to_conservative(w, out),
            PhysicsKind::Mhd => IdealMhd::new(self.gamma, GlmSettings::default()).to_conservative(w, out),
        }
    }

    /// Conserved initial state at `(x, y)`.
    pub fn initial_conservative(&self, x: f64, y: f64, out: &mut [f64]) {
        let mut w = [0.0; crate::physics::MAX_VARS];
        (self.initial)(x, y, &mut w[..self.num_vars()]);
        self.to_conservative(&w[..self.num_vars()], out);
    }
}

fn euler_conservative(gamma: f64, w: [f64; 4]) -> Vec<f64> {
    let mut u = vec![0.0; 4];
    Euler::new(gamma).to_conservative(&w, &mut u);
    u
}

/// Smooth density wave advected diagonally on the periodic box `[-1, 1]^2`.
pub fn convergence_case() -> TestCase {
    convergence_case_on(ConvergenceDomain::Printed)
}

/// The convergence case on the selected periodic domain.
pub fn convergence_case_on(domain: ConvergenceDomain) -> TestCase {
    let bounds = match domain {
        ConvergenceDomain::Printed => (-1.0, 1.0),
        ConvergenceDomain::Unit => (0.0, 1.0),
    };
    let gamma = 5.0 / 3.0;
    let exact: ExactFn = Arc::new(move |x, y, t, out: &mut [f64]| {
        let s = (2.0 * PI * (x + y - 2.0 * t)).sin();
        out[0] = 1.0 + 0.3 * s;
        out[1] = out[0];
        out[2] = out[0];
        // p = 1 and |v|^2 = 2 give rho e = 1/(gamma - 1) + rho
        out[3] = 1.0 + 0.3 * s + 1.0 / (gamma - 1.0);
    });
    TestCase {
        name: "convergence".into(),
        physics: PhysicsKind::Euler,
        gamma,
        x_bounds: bounds,
        y_bounds: bounds,
        initial: Arc::new(|x, y, w: &mut [f64]| {
            w[0] = 1.0 + 0.3 * (2.0 * PI * (x + y)).sin();
            w[1] = 1.0;
            w[2] = 1.0;
            w[3] = 1.0;
        }),
        exact: Some(exact),
        boundaries: Boundaries::periodic(),
        defaults: RunDefaults { degree: 7, nx: 4, ny: 4, cfl: 0.1, t_end: 0.4, filter: None },
    }
}

fn explosion_with(filter: FilterDefaults, name: &str) -> TestCase {
    TestCase {
        name: name.into(),
        physics: PhysicsKind::Euler,
        gamma: 5.0 / 3.0,
        x_bounds: (-1.0, 1.0),
        y_bounds: (-1.0, 1.0),
        initial: Arc::new(|x, y, w: &mut [f64]| {
            let inside = x * x + y * y <= 0.4 * 0.4;
            w[0] = if inside { 1.0 } else { 0.125 };
            w[1] = 0.0;
            w[2] = 0.0;
            w[3] = if inside { 1.0 } else { 0.1 };
        }),
        exact: None,
        boundaries: Boundaries::uniform(BoundaryCondition::Outflow),
        defaults: RunDefaults { degree: 7, nx: 80, ny: 80, cfl: 0.1, t_end: 0.25, filter: Some(filter) },
    }
}

/// Circular explosion, filtered with `(m, k) = (1, 6)`, `N_d = 0.6`.
pub fn explosion_case() -> TestCase {
    explosion_with(
        FilterDefaults {
            m: 1,
            k: 6,
            support: SupportSpec::ND(0.6),
            sigma_min: -7.0,
            sigma_max: -3.0,
            indicator: IndicatorVariable::Density,
            mode: FilterMode::Adaptive,
        },
        "explosion",
    )
}

/// Circular explosion, filtered with `(m, k) = (3, 6)`, `N_d = 2.5`.
pub fn explosion_case_m3() -> TestCase {
    explosion_with(
        FilterDefaults {
            m: 3,
            k: 6,
            support: SupportSpec::ND(2.5),
            sigma_min: -8.0,
            sigma_max: -5.0,
            indicator: IndicatorVariable::Density,
            mode: FilterMode::Adaptive,
        },
        "explosion-m3",
    )
}

/// Quadrant states `(top-left, bottom-left, top-right, bottom-right)` in primitive variables.
pub fn riemann_states(config: u32) -> Result<[[f64; 4]; 4]> {
    let tl = [2.0, 0.0, -0.3, 1.0];
    let bl = [1.0625, 0.0, 0.2145, 0.4];
    match config {
        17 => Ok([tl, bl, [1.0, 0.0, -0.4, 1.0], [0.5197, 0.0, -1.1259, 0.4]]),
        19 => Ok([tl, bl, [1.0, 0.0, 0.3, 1.0], [0.5197, 0.0, -0.4259, 0.4]]),
        other => Err(Error::config(format!("Riemann configuration {other} is not available (17 or 19)"))),
    }
}

/// Quadrant index into [`riemann_states`]. Left quadrants are `x < 0.5`;
/// the bottom-left set is `y <= 0.5`, the bottom-right set is `y < 0.5`.
pub fn riemann_quadrant(x: f64, y: f64) -> usize {
    if x < 0.5 {
        if y > 0.5 {
            0
        } else {
            1
        }
    } else if y >= 0.5 {
        2
    } else {
        3
    }
}

/// Four-state Riemann problem, configuration 17 or 19.
pub fn riemann_case(config: u32) -> Result<TestCase> {
    let states = riemann_states(config)?;
    Ok(TestCase {
        name: format!("riemann-{config}"),
        physics: PhysicsKind::Euler,
        gamma: 1.4,
        x_bounds: (0.0, 1.0),
        y_bounds: (0.0, 1.0),
        initial: Arc::new(move |x, y, w: &mut [f64]| w.copy_from_slice(&states[riemann_quadrant(x, y)])),
        exact: None,
        boundaries: Boundaries::uniform(BoundaryCondition::Outflow),
        defaults: RunDefaults {
            degree: 7,
            nx: 60,
            ny: 60,
            cfl: 0.1,
            t_end: 0.3,
            filter: Some(FilterDefaults {
                m: 5,
                k: 7,
                support: SupportSpec::ND(4.5),
                sigma_min: -8.0,
                sigma_max: -3.0,
                indicator: IndicatorVariable::Density,
                mode: FilterMode::Adaptive,
            }),
        },
    })
}

/// Shock position on the top boundary, `s(t) = 1/6 + (1 + 20 t)/sqrt(3)`.
pub fn double_mach_shock_position(t: f64) -> f64 {
    1.0 / 6.0 + (1.0 + 20.0 * t) / 3f64.sqrt()
}

/// Primitive `(left, right)` states of the double Mach reflection.
pub fn double_mach_states(variant: DoubleMachState) -> ([f64; 4], [f64; 4]) {
    let (v1, v2) = match variant {
        DoubleMachState::Printed => (8.25 * PI / 6.0, -8.25 * PI / 6.0),
        DoubleMachState::Standard => (8.25 * (PI / 6.0).cos(), -8.25 * (PI / 6.0).sin()),
    };
    ([8.0, v1, v2, 116.5], [1.4, 0.0, 0.0, 1.0])
}

/// Double Mach reflection on `[0, 3.25] x [0, 1]` with a sharp initial shock.
pub fn double_mach_case(variant: DoubleMachState) -> TestCase {
    double_mach_case_smeared(variant, 0.0)
}

/// Double Mach reflection whose initial shock blends the primitive states
/// with `(1 - tanh(d / width)) / 2`, `d` being the signed distance to the
/// shock line. A zero width gives the sharp jump.
pub fn double_mach_case_smeared(variant: DoubleMachState, width: f64) -> TestCase {
    let gamma = 1.4;
    let (wl, wr) = double_mach_states(variant);
    let ul = euler_conservative(gamma, wl);
    let ur = euler_conservative(gamma, wr);
    let x0 = 1.0 / 6.0;
    // Signed distance to the shock line x = x0 + (y + 20 t) / sqrt(3), whose
    // unit normal is (sqrt(3), -1) / 2.
    let smeared_shock = move |x: f64, y: f64, t: f64, w: &mut [f64]| {
        let d = 0.5 * (3f64.sqrt() * (x - x0) - y - 20.0 * t);
        if width > 0.0 {
            let a = 0.5 * (1.0 - (d / width).tanh());
            for (q, v) in w.iter_mut().enumerate() {
                *v = a * wl[q] + (1.0 - a) * wr[q];
            }
        } else {
            w.copy_from_slice(if d < 0.0 { &wl } else { &wr });
        }
    };
    let boundaries = Boundaries {
        left: BoundaryCondition::dirichlet_constant(ul.clone()),
        right: BoundaryCondition::Outflow,
        bottom: BoundaryCondition::Split {
            at: x0,
            below: Box::new(BoundaryCondition::dirichlet_constant(ul.clone())),
            above: Box::new(BoundaryCondition::ReflectingWall),
        },
        top: if width > 0.0 {
            BoundaryCondition::Dirichlet(Arc::new(move |x, y, t, out: &mut [f64]| {
                let mut w = [0.0; 4];
                smeared_shock(x, y, t, &mut w);
                Euler::new(gamma).to_conservative(&w, out);
            }))
        } else {
            BoundaryCondition::PiecewiseDirichlet {
                threshold: Arc::new(double_mach_shock_position),
                below: ul,
                above: ur,
            }
        },
    };
    TestCase {
        name: "double-mach".into(),
        physics: PhysicsKind::Euler,
        gamma,
        x_bounds: (0.0, 3.25),
        y_bounds: (0.0, 1.0),
        initial: Arc::new(move |x, y, w: &mut [f64]| smeared_shock(x, y, 0.0, w)),
        exact: None,
        boundaries,
        defaults: RunDefaults {
            degree: 7,
            nx: 325,
            ny: 100,
            cfl: 0.1,
            t_end: 0.2,
            filter: Some(FilterDefaults {
                m: 3,
                k: 6,
                support: SupportSpec::ND(2.5),
                sigma_min: -7.0,
                sigma_max: -2.0,
                indicator: IndicatorVariable::Density,
                mode: FilterMode::Adaptive,
            }),
        },
    }
}

/// Orszag-Tang vortex on the periodic unit square.
pub fn orszag_tang_case() -> TestCase {
    let gamma = 5.0 / 3.0;
    let b0 = 1.0 / (4.0 * PI).sqrt();
    TestCase {
        name: "orszag-tang".into(),
        physics: PhysicsKind::Mhd,
        gamma,
        x_bounds: (0.0, 1.0),
        y_bounds: (0.0, 1.0),
        initial: Arc::new(move |x, y, w: &mut [f64]| {
            w.fill(0.0);
            w[0] = gamma * 5.0 / (12.0 * PI);
            w[1] = -(2.0 * PI * y).sin();
            w[2] = (2.0 * PI * x).sin();
            w[4] = 5.0 / (12.0 * PI);
            w[5] = -b0 * (2.0 * PI * y).sin();
            w[6] = b0 * (4.0 * PI * x).sin();
        }),
        exact: None,
        boundaries: Boundaries::periodic(),
        defaults: RunDefaults {
            degree: 5,
            nx: 40,
            ny: 40,
            cfl: 0.5,
            t_end: 0.5,
            filter: Some(FilterDefaults {
                m: 3,
                k: 8,
                support: SupportSpec::Epsilon(1.4),
                sigma_min: -8.0,
                sigma_max: -8.0,
                indicator: IndicatorVariable::Pressure,
                mode: FilterMode::Adaptive,
            }),
        },
    }
}

/// Primitive rotor state at `(x, y)` with `r0 = 0.1`, `r1 = 0.115`, `u0 = 2`.
pub fn magnetic_rotor_state(x: f64, y: f64, w: &mut [f64]) {
    let (r0, r1, u0) = (0.1, 0.115, 2.0);
    let r = ((x - 0.5).powi(2) + (y - 0.5).powi(2)).sqrt();
    w.fill(0.0);
    let (rho, scale) = if r < r0 {
        (10.0, 1.0)
    } else if r <= r1 {
        let s = (r1 - r) / (r1 - r0);
        (1.0 + 9.0 * s, s)
    } else {
        (1.0, 0.0)
    };
    w[0] = rho;
    w[1] = scale * u0 / r0 * (0.5 - y);
    w[2] = scale * u0 / r0 * (x - 0.5);
    w[4] = 1.0;
    w[5] = 5.0 / (4.0 * PI).sqrt();
}

/// Magnetic rotor on the periodic unit square.
pub fn magnetic_rotor_case() -> TestCase {
    TestCase {
        name: "magnetic-rotor".into(),
        physics: PhysicsKind::Mhd,
        gamma: 1.4,
        x_bounds: (0.0, 1.0),
        y_bounds: (0.0, 1.0),
        initial: Arc::new(magnetic_rotor_state),
        exact: None,
        boundaries: Boundaries::periodic(),
        defaults: RunDefaults {
            degree: 4,
            nx: 100,
            ny: 100,
            cfl: 0.5,
            t_end: 0.15,
            filter: Some(FilterDefaults {
                m: 1,
                k: 5,
                support: SupportSpec::Epsilon(1.4),
                sigma_min: -9.0,
                sigma_max: -6.0,
                indicator: IndicatorVariable::Density,
                mode: FilterMode::Adaptive,
            }),
        },
    }
}
