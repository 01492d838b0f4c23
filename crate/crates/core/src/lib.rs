//! Cheeger-type constants of convex polygons, Robin eigenvalue and torsion
//! solvers, geometric bounds relating them, and desk-scale honeycomb
//! partition experiments.
//!
//! The modules build on each other bottom-up:
//!
//! - [`geometry`]: convex polygons, inner parallel bodies, rounded bodies,
//!   hexagonal lattices.
//! - [`cheeger`]: closed-form and brute-force `p`-Cheeger constants, the
//!   discrete Faber-Krahn constant `gamma(n)`.
//! - [`robin1d`]: exact Robin eigenvalue and torsion on an interval.
//! - [`fem`]: P1 finite elements for Robin eigenvalues, torsion, the first
//!   nonzero Neumann eigenvalue and the constant `Sigma_infty`.
//! - [`bounds`]: upper and lower bounds checked against the FEM values.
//! - [`honeycomb`]: clusters of scaled Cheeger sets and partition energies.
//! - [`cli`]: the command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cheeger;
pub mod cli;
pub mod error;
pub mod fem;
pub mod geometry;
pub mod honeycomb;
pub mod optimize;
pub mod robin1d;

pub use error::{Error, Result};
pub use geometry::{ConvexPolygon, Core, Direction, Point, RoundedBody};
