use super::streams::{calibration_streams, pass_through_metrics};
use crate::detector::{lower_quantile, DetectorConfig, MIN_CALIBRATION_FRAMES};
use crate::sim::SystemConfig;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationReport {
    pub delta: f64,
    pub quantile: f64,
    /// Pass-through change metrics of the attack-free frames.
    pub metrics: Vec<f64>,
}

impl CalibrationReport {
    /// Fraction of change metrics at or above `level`.
    pub fn fraction_at_least(&self, level: f64) -> f64 {
        self.metrics.iter().filter(|&&c| c >= level).count() as f64 / self.metrics.len() as f64
    }

    /// Empirical CDF at every distinct metric value, ascending.
    pub fn cdf(&self) -> Vec<(f64, f64)> {
        let mut sorted = self.metrics.clone();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as f64;
        let mut rows: Vec<(f64, f64)> = Vec::new();
        for (i, &c) in sorted.iter().enumerate() {
            let p = (i + 1) as f64 / n;
            match rows.last_mut() {
                Some(last) if last.0 == c => last.1 = p,
                _ => rows.push((c, p)),
            }
        }
        rows
    }
}

/// Simulates `frames` attack-free frames and sets `delta` to the lower
/// `det.calibration_quantile` quantile of their change metrics.
pub fn calibrate(sys: &SystemConfig, det: &DetectorConfig, frames: usize) -> Result<CalibrationReport> {
    if frames < MIN_CALIBRATION_FRAMES {
        return Err(Error::InsufficientData {
            what: "calibration frames",
            needed: MIN_CALIBRATION_FRAMES,
            got: frames,
        });
    }
    let metrics = pass_through_metrics(&calibration_streams(sys, det, frames)?);
    Ok(CalibrationReport {
        delta: lower_quantile(&metrics, det.calibration_quantile)?,
        quantile: det.calibration_quantile,
        metrics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_merges_ties() {
        let r = CalibrationReport { delta: 0.9, quantile: 0.05, metrics: vec![1.0, 0.9, 1.0, 0.95] };
        assert_eq!(r.cdf(), vec![(0.9, 0.25), (0.95, 0.5), (1.0, 1.0)]);
        assert_eq!(r.fraction_at_least(0.95), 0.75);
    }
}
