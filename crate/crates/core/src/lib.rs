//! Numerical laboratory for the torsion problem `-Δu = s` on convex polygons.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`] – exact convex-polygon geometry (areas, Chebyshev centre,
//!   circle overlaps, Fraenkel asymmetry, polar momentum, cone hulls).
//! * [`potential`] – the Newtonian volume potential of a constant source and
//!   its gradient, in closed form over polygon edges.
//! * [`bie`] – Nyström discretisation of the double-layer equation for the
//!   harmonic correction and of the second-kind equation for the boundary flux.
//! * [`torsion`] – the assembled solution and the inequality audits.
//! * [`oracles`] – closed-form disk/ellipse solutions and a walk-on-spheres
//!   estimator used as independent ground truth.
//! * [`bounds`] – the strip heat-kernel upper-bound certifier.
//! * [`shapeopt`] – derivative-free maximisation of `‖∇u‖∞ / |Ω|^{1/2}`.
//!
//! Supporting modules: [`quadrature`], [`optim`], [`corpus`] and [`io`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bie;
pub mod bounds;
pub mod corpus;
mod error;
pub mod geometry;
pub mod io;
pub mod optim;
pub mod oracles;
pub mod potential;
pub mod quadrature;
pub mod shapeopt;
pub mod torsion;

pub use bie::{BoundaryMesh, DensitySolution, FluxSolution, Resolution};
pub use bounds::{BoundResult, StripKernelParams};
pub use error::{Error, Result};
pub use geometry::{ConeHull, ConvexPolygon, DiskSpec, Point2};
pub use potential::VolumePotential;
pub use shapeopt::{ShapeCandidate, ShapeParams};
pub use torsion::{AuditReport, TorsionSolution};
