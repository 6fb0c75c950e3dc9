//! Verification engine for the normal homogeneous Stiefel manifold
//! `V_2(R^{n+2}) = SO(n+2)/SO(n)`: Lie algebra primitives, the reductive
//! structure, curvature, totally geodesic submanifolds and isometric actions.

pub mod actions;
pub mod curvature;
pub mod error;
pub mod exec;
pub mod homspace;
pub mod liealg;
pub mod octonion;
pub mod sampling;
pub mod tables;
pub mod totgeo;

pub use error::{Error, Result};
pub use exec::Exec;
pub use homspace::{build_space, StiefelSpace};
pub use liealg::{AlgElement, Subspace};
