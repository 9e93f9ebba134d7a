//! Kinematics of two congruent tetrahedra inscribed in a parallelepiped whose
//! originally intersecting edges must stay coplanar, together with the
//! infinitesimal mobility of the related pyramid-pair bar structures.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: vectors, rotations, rigid motions, the coplanarity predicate.
//! * [`mechanism`]: the tetrahedron pair, its six face pairings and residuals.
//! * [`solver`]: the affine system in the translation for a fixed rotation,
//!   in direct and reduced form, with a rank-revealing solve.
//! * [`families`]: closed-form generators for every motion kind and a classifier.
//! * [`manifold`]: third-kind branch structure, Gauss–Newton refinement,
//!   continuation and a completeness probe.
//! * [`mobility`]: rigidity-matrix analysis of bar structures.
//! * [`generalized`]: the signed-volume relaxation of the coplanarity constraint.
//! * [`cli`]: configuration, file formats and the command implementations.

// `!(x <= tol)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod families;
pub mod generalized;
pub mod geometry;
mod linalg;
pub mod manifold;
pub mod mechanism;
pub mod mobility;
pub mod solver;

pub use error::{Error, Result};
pub use families::{classify, Classification, MotionKind};
pub use geometry::{AxisAngle, RigidMotion, RotationMatrix, Vec3};
pub use mechanism::{build_pair, BoxDims, ParallelepipedMap, ResidualVector, TetraPair};
pub use solver::{solve_b, ConstraintSystem, SolutionKind, SolutionSet};
