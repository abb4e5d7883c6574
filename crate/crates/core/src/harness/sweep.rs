use serde::Serialize;

use super::stats::Proportion;
use super::streams::{calibration_streams, count_alarms, pass_through_metrics, simulate_streams, streams_for};
use crate::detector::{lower_quantile, DetectorConfig};
use crate::sim::SystemConfig;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SweepParam {
    Mu,
    Rho,
    J,
    DMax,
    PUajDbm,
}

impl SweepParam {
    pub const ALL: [SweepParam; 5] = [SweepParam::Mu, SweepParam::Rho, SweepParam::J, SweepParam::DMax, SweepParam::PUajDbm];

    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Mu => "mu",
            SweepParam::Rho => "rho",
            SweepParam::J => "J",
            SweepParam::DMax => "D_max",
            SweepParam::PUajDbm => "P_uaj_dbm",
        }
    }

    /// Copy of `sys` with the parameter set to `value`.
    pub fn apply(self, sys: &SystemConfig, value: f64) -> Result<SystemConfig> {
        let mut out = sys.clone();
        match self {
            SweepParam::Mu => out.mu = value,
            SweepParam::Rho => out.rho = value,
            SweepParam::J => {
                if !(value >= 0.0 && value.fract() == 0.0) {
                    return Err(Error::range("J", format!("requires a non-negative integer, got {value}")));
                }
                out.j = value as usize;
            }
            SweepParam::DMax => out.d_attacker_range.1 = value,
            SweepParam::PUajDbm => out.p_uaj_dbm = value,
        }
        out.validate()?;
        Ok(out)
    }
}

impl std::fmt::Display for SweepParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepParam::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::range("param", format!("unknown sweep parameter {s:?} (mu, rho, J, D_max, P_uaj_dbm)")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub param: SweepParam,
    pub value: f64,
    /// Threshold recalibrated for this point.
    pub delta: f64,
    pub false_alarms: Proportion,
    /// `None` when the point has no attackers.
    pub detections: Option<Proportion>,
}

/// For every value: recalibrate `delta` on attack-free streams, then measure
/// `P_F` and `P_D` over `n_frames` judged frame pairs. All points share trial seeds.
pub fn run_sweep(
    sys: &SystemConfig,
    det: &DetectorConfig,
    param: SweepParam,
    values: &[f64],
    n_frames: usize,
    calibration_frames: usize,
) -> Result<Vec<SweepPoint>> {
    if values.is_empty() {
        return Err(Error::range("values", "sweep needs at least one value"));
    }
    let count = streams_for(n_frames, sys.l)? as u64;
    values
        .iter()
        .map(|&value| {
            let point = param.apply(sys, value)?;
            let cal = calibration_streams(&point, det, calibration_frames)?;
            let delta = lower_quantile(&pass_through_metrics(&cal), det.calibration_quantile)?;
            let streams = simulate_streams(&point, det, 0..count, point.l)?;
            let counts = count_alarms(&streams, delta);
            Ok(SweepPoint {
                param,
                value,
                delta,
                false_alarms: counts.false_alarms,
                detections: (point.j > 0).then_some(counts.detections),
            })
        })
        .collect()
}
