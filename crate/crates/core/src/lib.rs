//! Core numerics for an acid-mediated tumor invasion model.
//!
//! The model couples healthy cells `u` (no diffusion), tumor cells `v`
//! (density-limited diffusion `D (1-u)`) and lactic acid `w` on a bounded
//! domain with zero-flux boundaries:
//!
//! ```text
//! u_t = u (1 - u - a2 v) - d1 u w
//! v_t = D div((1-u) grad v) + r v (1 - a1 u - v) - d2 v w
//! w_t = lap w + c (v - w)
//! ```
//!
//! This crate is `no_std` + `alloc`. It provides:
//!
//! * [`model`] — steady states and linear stability classification,
//! * [`regimes`] — global-stability thresholds and theorem-case classification,
//! * [`lyapunov`] — positive-definiteness certificates and energy functionals,
//! * [`pde`] — a 1-D finite-volume / Heun method-of-lines solver,
//! * [`auxode`] — comparison (upper/lower solution) ODE systems and checks.
//!
//! IO, file formats and the command line live in the companion `acidlab` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(test)]
#[macro_use]
extern crate std;

pub mod auxode;
pub mod lyapunov;
pub mod model;
pub mod pde;
pub mod regimes;
pub mod util;

pub use model::{ModelParams, StabilityVerdict, SteadyState, SteadyStateKind};
