use serde::{Deserialize, Serialize};

use crate::fa::{MomentMode, SecondMoment};
use crate::{Error, Result};

/// How the variance floor `eps` is chosen for a frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FloorRule {
    /// The same `eps` for every frame.
    Absolute(f64),
    /// `eps = ratio * tr(R) / d`: a fixed fraction of the frame's mean energy per
    /// coordinate, so the feature does not depend on the received power level.
    MeanEnergy { ratio: f64 },
}

/// Smallest floor ever used; keeps `1 / eps` finite on silent frames.
pub const MIN_FLOOR: f64 = 1e-300;

impl FloorRule {
    pub fn resolve(&self, moment: &SecondMoment) -> f64 {
        match *self {
            FloorRule::Absolute(eps) => eps,
            FloorRule::MeanEnergy { ratio } => (ratio * moment.trace() / moment.dim() as f64).max(MIN_FLOOR),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectorConfig {
    pub mode: MomentMode,
    pub rank: usize,
    pub floor: FloorRule,
    pub eps_stop: f64,
    pub max_iter: usize,
    /// Alarm when `c <= delta`.
    pub delta: f64,
    pub calibration_quantile: f64,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            mode: MomentMode::SlotCovariance,
            rank: 2,
            floor: FloorRule::MeanEnergy { ratio: 0.04 },
            eps_stop: 1e-3,
            max_iter: 500,
            delta: 0.95,
            calibration_quantile: 0.05,
        }
    }
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rank == 0 {
            return Err(Error::range("r", "requires r >= 1"));
        }
        match self.floor {
            FloorRule::Absolute(eps) if !(eps > 0.0 && eps.is_finite()) => {
                return Err(Error::range("eps_floor", format!("requires eps_floor > 0, got {eps}")));
            }
            FloorRule::MeanEnergy { ratio } if !(ratio > 0.0 && ratio.is_finite()) => {
                return Err(Error::range("floor_ratio", format!("requires floor_ratio > 0, got {ratio}")));
            }
            _ => {}
        }
        if !(self.eps_stop > 0.0 && self.eps_stop.is_finite()) {
            return Err(Error::range("eps_stop", format!("requires eps_stop > 0, got {}", self.eps_stop)));
        }
        if self.max_iter == 0 {
            return Err(Error::range("max_iter", "requires max_iter >= 1"));
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(Error::range("delta", format!("requires 0 < delta <= 1, got {}", self.delta)));
        }
        if !(self.calibration_quantile > 0.0 && self.calibration_quantile < 0.5) {
            return Err(Error::range(
                "calibration_quantile",
                format!("requires 0 < q < 0.5, got {}", self.calibration_quantile),
            ));
        }
        Ok(())
    }

    /// Feature dimension for `N` chips and `Ts` slots.
    pub fn dim(&self, chips: usize, slots: usize) -> usize {
        match self.mode {
            MomentMode::SlotCovariance => 2 * chips,
            MomentMode::Vectorized => 2 * chips * slots,
        }
    }
}

#[cfg(test)]
mod tests {
    use nalgebra::DMatrix;

    use super::*;

    #[test]
    fn defaults_are_valid() {
        DetectorConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_bad_values() {
        let bad = [
            DetectorConfig { delta: 0.0, ..Default::default() },
            DetectorConfig { delta: 1.1, ..Default::default() },
            DetectorConfig { rank: 0, ..Default::default() },
            DetectorConfig { floor: FloorRule::Absolute(0.0), ..Default::default() },
            DetectorConfig { calibration_quantile: 0.5, ..Default::default() },
        ];
        for cfg in bad {
            assert!(cfg.validate().unwrap_err().is_config_error());
        }
    }

    #[test]
    fn mean_energy_floor() {
        let m = SecondMoment::dense(DMatrix::from_diagonal_element(4, 4, 2.0)).unwrap();
        assert_eq!(FloorRule::MeanEnergy { ratio: 0.5 }.resolve(&m), 1.0);
        assert_eq!(FloorRule::Absolute(0.3).resolve(&m), 0.3);
        let zero = SecondMoment::dense(DMatrix::zeros(3, 3)).unwrap();
        assert_eq!(FloorRule::MeanEnergy { ratio: 0.5 }.resolve(&zero), MIN_FLOOR);
    }
}
