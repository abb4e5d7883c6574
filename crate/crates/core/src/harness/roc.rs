use serde::Serialize;

use super::stats::Proportion;
use super::streams::{
    calibration_streams, count_alarms, pass_through_metrics, simulate_streams, streams_for, StreamOutcome,
};
use crate::detector::{lower_quantile, DetectorConfig};
use crate::sim::SystemConfig;
use crate::{Error, Result};

/// Thresholds `0.50, 0.51, ..., 1.00`.
pub fn default_delta_grid() -> Vec<f64> {
    (50..=100).map(|i| i as f64 / 100.0).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RocPoint {
    pub threshold: f64,
    pub p_f: f64,
    pub p_d: f64,
    /// Judged frame pairs behind each estimate.
    pub n_trials: usize,
    pub false_alarms: Proportion,
    pub detections: Proportion,
}

pub fn roc_points(streams: &[StreamOutcome], grid: &[f64]) -> Vec<RocPoint> {
    let mut grid = grid.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.iter()
        .map(|&delta| {
            let counts = count_alarms(streams, delta);
            RocPoint {
                threshold: delta,
                p_f: counts.p_f().unwrap_or(0.0),
                p_d: counts.p_d().unwrap_or(0.0),
                n_trials: counts.false_alarms.trials,
                false_alarms: counts.false_alarms,
                detections: counts.detections,
            }
        })
        .collect()
}

/// Highest detection rate among points with `P_F <= max_pf`.
pub fn best_at_false_alarm(points: &[RocPoint], max_pf: f64) -> Option<RocPoint> {
    points
        .iter()
        .filter(|p| p.p_f <= max_pf)
        .copied()
        .max_by(|a, b| a.p_d.total_cmp(&b.p_d).then(b.threshold.total_cmp(&a.threshold)))
}

#[derive(Debug, Clone)]
pub struct RocReport {
    pub points: Vec<RocPoint>,
    /// Threshold calibrated on separate attack-free streams.
    pub calibrated_delta: f64,
    pub calibration_metrics: Vec<f64>,
    pub streams: Vec<StreamOutcome>,
}

/// Calibrates on `calibration_frames` attack-free frames, then evaluates
/// `n_trials` paired frames for every threshold in `grid`.
pub fn run_roc(
    sys: &SystemConfig,
    det: &DetectorConfig,
    n_trials: usize,
    calibration_frames: usize,
    grid: &[f64],
) -> Result<RocReport> {
    if n_trials < 100 {
        return Err(Error::range("n_trials", format!("ROC needs at least 100 paired frames, got {n_trials}")));
    }
    if sys.j == 0 {
        return Err(Error::range("J", "ROC needs attackers (J >= 1)"));
    }
    let cal = calibration_streams(sys, det, calibration_frames)?;
    let calibration_metrics = pass_through_metrics(&cal);
    let calibrated_delta = lower_quantile(&calibration_metrics, det.calibration_quantile)?;
    let count = streams_for(n_trials, sys.l)? as u64;
    let streams = simulate_streams(sys, det, 0..count, sys.l)?;
    Ok(RocReport {
        points: roc_points(&streams, grid),
        calibrated_delta,
        calibration_metrics,
        streams,
    })
}
