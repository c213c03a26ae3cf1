//! Reduce linear and quadratic 0/1 programs with integer equality constraints
//! to MAX-CUT, then bound them.
//!
//! The pipeline is:
//!
//! 1. [`model`]: carry the program over {0,1}ⁿ or {−1,1}ⁿ, expand `≤` rows
//!    into equalities with binary slack bits, switch domains exactly.
//! 2. [`penalty`]: compute ρ(c,F), an upper bound on |objective| over the
//!    hypercube, from two box SDPs (closed form when F = 0).
//! 3. [`reduction`]: penalize ‖Ax − b‖² with weight 2ρ+1 and homogenize into
//!    a quadratic form on {−1,1}ⁿ⁺¹ whose minimum equals the constrained
//!    optimum (or exceeds ρ when the program is infeasible).
//! 4. [`relaxations`] and [`bounds`]: Shor/MAX-CUT SDP, first moment
//!    relaxation, LP box, convex eigen-shift QP, doubly nonnegative
//!    relaxation, Nesterov's sandwich, hyperplane rounding and an
//!    infeasibility certificate.
//!
//! [`sdp`] is a small dense ADMM solver used by every semidefinite bound.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod exec;
pub mod fmt;
pub mod instances;
pub(crate) mod linalg;
pub mod model;
pub mod penalty;
pub mod reduction;
pub mod relaxations;
pub mod report;
pub mod sdp;

pub use error::{Error, Result};
pub use model::{RowSense, SignProgram, ZeroOneProgram};
pub use penalty::PenaltyBound;
pub use reduction::MaxCutInstance;
pub use sdp::{SdpProblem, SdpSolution, SolverConfig};
