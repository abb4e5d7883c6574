//! Monte Carlo experiments: calibration, ROC, parameter sweeps, feature-change
//! and convergence studies, and the energy baseline.
//!
//! A trial is a stream of `L` attack-free frames over one topology. Every frame
//! also has a jammed twin (the same frame plus the jammer signal); the twin is
//! judged against the reference the detector holds at that point of the
//! attack-free stream, so false-alarm and detection rates come from the same
//! device and channel draws.

mod calibration;
mod detect;
mod ec;
pub mod output;
mod roc;
pub mod stats;
pub mod streams;
mod studies;
mod sweep;

pub use calibration::{calibrate, CalibrationReport};
pub use detect::{run_detection, AttackSchedule};
pub use ec::{calibrate_ec, ec_at_false_alarm, ec_decide, ec_detect, ec_point, judged_energies, EcPoint};
pub use output::{stream_records, ExperimentRecord, OutputHeader};
pub use roc::{best_at_false_alarm, default_delta_grid, roc_points, run_roc, RocPoint, RocReport};
pub use stats::{Proportion, TrendTest};
pub use streams::{simulate_streams, StreamOutcome};
pub use studies::{convergence_study, feature_change_study, median_iterations, ConvergenceTrace, FeatureChangeRow};
pub use sweep::{run_sweep, SweepParam, SweepPoint};
