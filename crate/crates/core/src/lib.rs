//! Exact computation of structure functions (nonholonomic curvature) for
//! graded nilpotent symbol algebras of distributions.
//!
//! The pipeline runs from a polynomial Pfaff system or a set of spanning
//! vector fields ([`distribution`]) to its symbol algebra
//! ([`graded_lie`]), through the graded prolongation of the pair
//! `(g_-, g_0)` ([`prolong`]), to the Chevalley-Eilenberg cohomology
//! `H^2(g_-; tower)` split by order ([`cohomology`]). All arithmetic is
//! exact over the rationals ([`linalg`]).

pub mod cli;
pub mod cohomology;
pub mod distribution;
pub mod error;
pub mod expr;
pub mod graded_lie;
pub mod linalg;
pub mod poly;
pub mod prolong;
pub mod scalar;
pub mod verify;
pub mod vf;

pub use error::{Error, Result};
pub use scalar::Scalar;
