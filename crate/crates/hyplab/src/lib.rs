//! Numerical laboratory for the equation −Δ_{B^N} u − λu = |u|^{p−1}u on the
//! disc model of hyperbolic space.
//!
//! The crate computes the positive radial ground state by shooting on the
//! amplitude, discretizes the linearized operator mode by mode as a symmetric
//! tridiagonal eigenproblem, and evaluates the auxiliary-energy machinery that
//! drives the uniqueness and Morse-index analysis. Everything is plain `f64`
//! with explicit tolerances; solves for distinct parameters are pure and can
//! run concurrently.
//!
//! Module map:
//! - [`geometry`]: disc-model metric, hyperbolic translations, kernel vector fields
//! - [`ode`]: radial ODE with adaptive embedded Runge–Kutta and trajectory classification
//! - [`groundstate`]: shooting bisection on the full space and on geodesic balls
//! - [`spectral`]: per-mode tridiagonal discretization, Sturm-sequence eigensolver,
//!   Morse index and kernel-gap reports
//! - [`energy`]: auxiliary energy E, the coefficient G and its derivative,
//!   the perturbed functional and the conformal change to Euclidean form
//! - [`verify`]: cross-checks tying geometry to analysis (isometry invariance,
//!   kernel formula, Poincaré–Sobolev positivity)
//! - [`sweep`]: parameter sweeps aggregating the per-row verdicts

pub mod energy;
pub mod error;
pub mod geometry;
pub mod groundstate;
pub mod interp;
pub mod io;
pub mod numutil;
pub mod ode;
pub mod spectral;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use groundstate::{RadialProfile, SolveControls};
pub use ode::{ProblemParams, Regime};
