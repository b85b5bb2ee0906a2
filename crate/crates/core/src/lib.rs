//! Simulation and analysis of the classical and quantum sawtooth maps under
//! kick noise.
//!
//! The crate covers four layers:
//!
//! * [`classical`]: the classical map, its Lyapunov exponent and diffusion
//!   coefficient, and ensemble diffusion under noise;
//! * [`engine`]: split-operator evolution of the quantum map and the two-way
//!   Loschmidt echo `f(t)`;
//! * [`decay`] and [`bounds`]: decay rates extracted from fidelity traces and
//!   the closed-form bounds that delimit Lyapunov-rate decay;
//! * [`hardware`]: gate-error reductions needed on named platforms.
//!
//! [`runner`] ties them into reproducible experiments with CSV output and JSON
//! sidecars; the `qsm` binary is a thin command-line front end over it.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod classical;
pub mod decay;
pub mod engine;
pub mod error;
pub mod hardware;
pub mod output;
pub mod params;
pub mod runner;
pub mod state;
pub mod stats;

pub use error::{Error, Result};
pub use params::{Kick, MapParams};
pub use state::{Basis, CenteredFourier, QuantumState};
