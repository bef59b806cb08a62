//! Exact jet-level decision procedure for whether a planar function with
//! leading term `Re(x+iy)^m` is diffeomorphic to `Re(x+iy)^m`.
//!
//! The engine builds, degree by degree, a formal metric whose Laplacian
//! annihilates the given jet. Each degree reduces to a linear system for the
//! operator Θ_k; the jet is equivalent to its leading term exactly when the
//! right-hand sides for `k = 1, …, m-4` lie in the image of Θ_k.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod io;
pub mod jetflow;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod sampling;
pub mod theta;
pub mod verify;

pub use error::{Error, Result};
pub use jetflow::{
    assert_ak, make_fstar, obstruct, phi_next, run, s_of_m, Jet, JetFlow, ObstructionReport,
    StarJet, StepRecord, Verdict,
};
pub use linalg::Matrix;
pub use poly::{CxHomPoly, GradedPoly, HomPoly, IrrComponent, Var};
pub use rational::Rational;
pub use theta::{build_theta, Pairing, SolveOutcome, ThetaOperator};
