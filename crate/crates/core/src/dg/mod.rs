//! Discontinuous Galerkin spectral element discretization on Cartesian meshes.

pub mod boundary;
pub mod field;
pub mod mesh;
pub mod operator;
pub mod time;

pub use boundary::{BoundaryCondition, Boundaries, Side};
pub use field::SolutionField;
pub use mesh::CartesianMesh;
pub use operator::DgOperator;
pub use time::{cfl_timestep, LowStorageRk};

#[cfg(test)]
mod tests;
