//! Sparsity-constrained maximum-likelihood factor analysis.
//!
//! Given a second-moment matrix `R`, the solver fits `Sigma = V V^T + P` with
//! `rank(V V^T) <= r` and a diagonal `P >= eps * I`. The low-rank part is
//! eliminated in closed form, which leaves an objective in `gamma = diag(P^-1)`
//! that splits into a convex part and a convex spectral function of
//! `Gamma^1/2 R Gamma^1/2`. The convex-concave procedure linearizes the spectral
//! part at each iterate; the resulting surrogate separates per coordinate and has
//! the closed-form minimizer used by [`ccp_step`].
//!
//! The number of coordinates left above the floor (`tau`) is the sparsity feature
//! consumed by the detector.

mod ccp;
mod moment;
mod objective;
mod problem;
mod reconstruct;
mod spectral;

pub use ccp::{ccp_step, dc_solve, initial_gamma, subgradient_f2, support_size, CcpStep, SATURATION_TOLERANCE};
pub use moment::{moment_matrix, MomentMode};
pub use objective::{f2_value, p1_objective, p2_objective};
pub use problem::{default_rank, EigenRoute, FaProblem, FaSolution, SecondMoment};
pub use reconstruct::{reconstruct_covariance, sherman_woodbury_inverse, Reconstruction};
pub use spectral::{scaled_spectrum, Spectrum, EIGEN_CLAMP};
