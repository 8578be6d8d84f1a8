//! Triangular-grid discretization, exact symmetry bookkeeping, and automated
//! branch following for the superlinear elliptic boundary value problem
//! `Delta u + lambda*u + u^3 = 0` with zero Dirichlet data on Koch-snowflake
//! regions.
//!
//! The pieces fit together like this:
//!
//! * [`geometry`] builds the triangular grid inside the level-`l` snowflake
//!   polygon, with the exact 12-element planar symmetry action.
//! * [`group`] holds the exact group theory of the 24-element symmetry group
//!   (plane symmetries times the sign flip `u -> -u`), including the 23
//!   symmetry types a solution can have.
//! * [`spectrum`] assembles the discrete Laplacian, computes the first `M`
//!   eigenpairs, and symmetry-adapts them so every fixed-point subspace used
//!   later is a coordinate subspace of coefficient space.
//! * [`rep`] works with concrete orthogonal representations: averaging
//!   projectors, stabilizers, and the isotypic decomposition for any subgroup.
//! * [`digraph`] computes, once and for all, which symmetry types can
//!   bifurcate to which (65 arrows between the 23 types) and how each such
//!   degeneracy should be seeded.
//! * [`gnga`] evaluates the variational functional, its gradient and Hessian
//!   in coefficient space, and runs the Newton solvers (plain and
//!   parameter-modified).
//! * [`continuation`] follows solution branches, detects and localizes
//!   bifurcations via Morse-index changes, seeds daughter branches, and
//!   orchestrates the whole recursive sweep.
//! * [`config`] and [`io`] hold the run configuration and the on-disk
//!   formats; the `snowpde` binary wires them to a CLI.

pub mod config;
pub mod continuation;
pub mod digraph;
pub mod error;
pub mod geometry;
pub mod gnga;
pub mod group;
pub mod io;
pub mod rep;
pub mod spectrum;

pub use error::{Error, Result};
