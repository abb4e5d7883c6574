//! Joint space-time sparsity (JSTS) jamming detection for grant-free mMTC uplinks.
//!
//! The crate is organized the way the data flows:
//!
//! - [`sim`] synthesizes normal and jammed uplink frames (Markov device activity,
//!   spreading, fading, path loss, attackers that forge spreading combinations).
//! - [`fa`] solves the rank- and floor-constrained maximum-likelihood factor
//!   analysis problem with a difference-of-convex (convex-concave) iteration.
//! - [`detector`] turns a frame into the support-size feature `tau` and runs
//!   sequential change-frame detection against a calibrated threshold.
//! - [`harness`] is the Monte Carlo runner: calibration, ROC, parameter sweeps,
//!   feature-change and convergence studies, plus the energy (EC) baseline.
//! - [`cli`] binds key=value configuration files to all of the above; the `jsts`
//!   binary is a thin wrapper around [`cli::dispatch`].
//!
//! See `examples/` for one runnable program per capability.

pub mod cli;
pub mod detector;
pub mod error;
pub mod fa;
pub mod harness;
pub mod rng;
pub mod selftest;
pub mod sim;

pub use error::{Error, Result};
