//! Sparsity feature extraction and sequential change-frame detection.
//!
//! Each frame is real-expanded, reduced to a second-moment matrix and passed to
//! the factor-analysis solver; the number of unsaturated coordinates `tau` is the
//! feature. Consecutive features are compared through `c = 1 - |dtau / tau_prev|`
//! and a frame alarms when `c <= delta`. Alarmed frames do not replace the
//! reference feature.

mod config;
mod feature;
mod sequential;

pub use config::{DetectorConfig, FloorRule};
pub use feature::{extract_feature, real_expand, real_expand_matrix};
pub use sequential::{
    calibrate_threshold, calibration_metrics, change_metric, lower_quantile, Decision, DetectorState,
    LogEntry, MIN_CALIBRATION_FRAMES,
};
