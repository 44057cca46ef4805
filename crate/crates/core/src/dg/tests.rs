use std::sync::Arc;

use approx::assert_abs_diff_eq;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::error::Result;
use crate::physics::{Direction, Euler, LaxFriedrichs, PhysicsSystem};
use crate::reference::ReferenceElement;

/// Scalar linear advection `u_t + a u_x + b u_y = 0`, used as an oracle system.
struct Advection {
    a: f64,
    b: f64,
}

impl PhysicsSystem for Advection {
    fn num_vars(&self) -> usize {
        1
    }
    fn gamma(&self) -> f64 {
        1.4
    }
    fn var_names(&self) -> &'static [&'static str] {
        &["u"]
    }
    fn primitive_names(&self) -> &'static [&'static str] {
        &["u"]
    }
    fn flux(&self, u: &[f64], dir: Direction, out: &mut [f64]) {
        out[0] = match dir {
            Direction::X => self.a * u[0],
            Direction::Y => self.b * u[0],
        };
    }
    fn max_wave_speed(&self, _u: &[f64], dir: Direction) -> f64 {
        match dir {
            Direction::X => self.a.abs(),
            Direction::Y => self.b.abs(),
        }
    }
    fn pressure(&self, _u: &[f64]) -> f64 {
        1.0
    }
    fn to_primitive(&self, u: &[f64], out: &mut [f64]) {
        out[0] = u[0];
    }
    fn to_conservative(&self, w: &[f64], out: &mut [f64]) {
        out[0] = w[0];
    }
    fn reflect(&self, u: &[f64], _dir: Direction, out: &mut [f64]) {
        out[0] = u[0];
    }
    fn check_admissible(&self, _u: &[f64]) -> Result<()> {
        Ok(())
    }
}

fn euler_state(rho: f64, v1: f64, v2: f64, p: f64) -> [f64; 4] {
    let e = Euler::new(1.4);
    let mut u = [0.0; 4];
    e.to_conservative(&[rho, v1, v2, p], &mut u);
    u
}

#[test]
fn free_stream_is_preserved() {
    let e = Euler::new(1.4);
    let state = euler_state(1.3, 0.4, -0.7, 2.1);
    for bcs in [
        Boundaries::periodic(),
        Boundaries::uniform(BoundaryCondition::Outflow),
        Boundaries::uniform(BoundaryCondition::dirichlet_constant(state.to_vec())),
    ] {
        let mesh = CartesianMesh::new((0.0, 1.0), (-0.5, 0.5), 3, 4).unwrap();
        let re = Arc::new(ReferenceElement::new(4).unwrap());
        let field = SolutionField::from_fn(mesh, re, 4, |_, _, out| out.copy_from_slice(&state));
        let mut op = DgOperator::new(&field, bcs, LaxFriedrichs::Local).unwrap();
        let mut du = vec![1.0; field.data().len()];
        op.rhs(&e, field.data(), 0.0, &mut du).unwrap();
        let m = du.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        assert!(m < 1e-12, "free-stream residual {m}");
    }
}

#[test]
fn periodic_operator_conserves_totals() {
    let e = Euler::new(1.4);
    let mesh = CartesianMesh::new((0.0, 2.0), (0.0, 2.0), 4, 3).unwrap();
    let re = Arc::new(ReferenceElement::new(3).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let field = SolutionField::from_fn(mesh, Arc::clone(&re), 4, |_, _, out| {
        let s = euler_state(
            rng.gen_range(0.5..2.0),
            rng.gen_range(-0.5..0.5),
            rng.gen_range(-0.5..0.5),
            rng.gen_range(0.5..2.0),
        );
        out.copy_from_slice(&s);
    });
    for mode in [LaxFriedrichs::Local, LaxFriedrichs::Global] {
        let mut op = DgOperator::new(&field, Boundaries::periodic(), mode).unwrap();
        let mut du = vec![0.0; field.data().len()];
        op.rhs(&e, field.data(), 0.0, &mut du).unwrap();
        let du_field = field.with_data(du);
        let w = re.weights();
        let np = re.num_nodes();
        for q in 0..4 {
            let mut total = 0.0;
            let mut scale = 0.0;
            for n in 0..mesh.num_elements() {
                for j in 0..np {
                    for i in 0..np {
                        let v = w[i] * w[j] * mesh.jacobian() * du_field.get(n, i, j, q);
                        total += v;
                        scale += v.abs();
                    }
                }
            }
            assert!(total.abs() < 1e-13 * scale.max(1.0), "var {q}: {total} vs {scale}");
        }
    }
}

#[test]
fn degree_one_operator_matches_hand_assembly() {
    // N = 1: nodes +-1, weights 1, D = [[-1/2, 1/2], [-1/2, 1/2]]; upwind flux
    // for a = 1 from the left neighbour. Data is constant in y.
    let adv = Advection { a: 1.0, b: 0.0 };
    let mesh = CartesianMesh::new((0.0, 3.0), (0.0, 1.0), 3, 1).unwrap();
    let re = Arc::new(ReferenceElement::new(1).unwrap());
    let vals = [[0.3, 1.1], [-0.4, 2.0], [0.9, 0.5]];
    let mut field = SolutionField::zeros(mesh, re, 1);
    for (n, v) in vals.iter().enumerate() {
        for j in 0..2 {
            field.node_mut(n, 0, j)[0] = v[0];
            field.node_mut(n, 1, j)[0] = v[1];
        }
    }
    let mut op = DgOperator::new(&field, Boundaries::periodic(), LaxFriedrichs::Local).unwrap();
    let mut du = vec![0.0; field.data().len()];
    op.rhs(&adv, field.data(), 0.0, &mut du).unwrap();
    let du = field.with_data(du);
    let scale = 2.0 / mesh.dx;
    for n in 0..3 {
        let [u0, u1] = vals[n];
        let upstream = vals[(n + 2) % 3][1];
        let d0 = -scale * (0.5 * (u1 - u0) - (upstream - u0));
        let d1 = -scale * (0.5 * (u1 - u0));
        for j in 0..2 {
            assert_abs_diff_eq!(du.get(n, 0, j, 0), d0, epsilon = 1e-14);
            assert_abs_diff_eq!(du.get(n, 1, j, 0), d1, epsilon = 1e-14);
        }
    }
}

#[test]
fn advection_of_a_sine_converges_spectrally() {
    let adv = Advection { a: 1.0, b: 0.5 };
    let tau = std::f64::consts::TAU;
    let exact = |x: f64, y: f64, t: f64| (tau * (x + y - 1.5 * t)).sin();
    let mut errs = Vec::new();
    for nel in [4, 8] {
        let mesh = CartesianMesh::new((0.0, 1.0), (0.0, 1.0), nel, nel).unwrap();
        let re = Arc::new(ReferenceElement::new(3).unwrap());
        let mut field = SolutionField::from_fn(mesh, re, 1, |x, y, o| o[0] = exact(x, y, 0.0));
        let mut op = DgOperator::new(&field, Boundaries::periodic(), LaxFriedrichs::Local).unwrap();
        let mut rk = LowStorageRk::new(field.data().len());
        let t_end = 0.25;
        let steps = 40 * nel;
        let dt = t_end / steps as f64;
        let block = field.element_len();
        for s in 0..steps {
            rk.step(field.data_mut(), s as f64 * dt, dt, block, |u, t, out| op.rhs(&adv, u, t, out))
                .unwrap();
        }
        let np = field.num_nodes();
        let mut err = 0.0_f64;
        for n in 0..mesh.num_elements() {
            for j in 0..np {
                for i in 0..np {
                    let (x, y) = field.node_position(n, i, j);
                    err = err.max((field.get(n, i, j, 0) - exact(x, y, t_end)).abs());
                }
            }
        }
        errs.push(err);
    }
    let order = (errs[0] / errs[1]).log2();
    assert!(order > 3.3, "observed order {order} from {errs:?}");
}

#[test]
fn inadmissible_node_is_located() {
    let e = Euler::new(1.4);
    let mesh = CartesianMesh::new((0.0, 1.0), (0.0, 1.0), 2, 2).unwrap();
    let re = Arc::new(ReferenceElement::new(2).unwrap());
    let state = euler_state(1.0, 0.0, 0.0, 1.0);
    let mut field = SolutionField::from_fn(mesh, re, 4, |_, _, out| out.copy_from_slice(&state));
    field.node_mut(3, 1, 2)[0] = -1.0;
    let mut op = DgOperator::new(&field, Boundaries::periodic(), LaxFriedrichs::Local).unwrap();
    let mut du = vec![0.0; field.data().len()];
    let err = op.rhs(&e, field.data(), 0.0, &mut du).unwrap_err();
    match err {
        crate::Error::AtNode { element, i, j, .. } => assert_eq!((element, i, j), (3, 1, 2)),
        other => panic!("unexpected error {other:?}"),
    }
}

#[test]
fn cfl_rule() {
    let e = Euler::new(1.4);
    let mesh = CartesianMesh::new((0.0, 1.0), (0.0, 2.0), 10, 10).unwrap();
    let state = euler_state(1.4, 0.0, 0.0, 1.0);
    let dt = cfl_timestep(&e, &state, &mesh, 4, 0.9).unwrap();
    assert_abs_diff_eq!(dt, 0.9 * 0.1 / (1.0 * 9.0), epsilon = 1e-15);
    let adv = Advection { a: 0.0, b: 0.0 };
    assert!(cfl_timestep(&adv, &[1.0], &mesh, 4, 0.9).is_err());
}
