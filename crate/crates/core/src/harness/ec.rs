use serde::Serialize;

use super::stats::{upper_quantile, Proportion};
use super::streams::StreamOutcome;
use crate::detector::Decision;
use crate::sim::FrameObservation;
use crate::{Error, Result};

/// Energy detector: alarm when the frame energy `sum_t |y_t|^2` exceeds the threshold.
pub fn ec_detect(frame: &FrameObservation, threshold_energy: f64) -> Result<Decision> {
    ec_decide(frame.energy(), threshold_energy)
}

pub fn ec_decide(energy: f64, threshold_energy: f64) -> Result<Decision> {
    if !(threshold_energy > 0.0) {
        return Err(Error::Domain(format!("energy threshold must be positive, got {threshold_energy}")));
    }
    Ok(if energy > threshold_energy { Decision::Attacked } else { Decision::Normal })
}

/// Threshold at the `(1 - q)` empirical quantile of attack-free frame energies.
pub fn calibrate_ec(normal_energies: &[f64], q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::range("calibration_quantile", format!("requires 0 < q < 1, got {q}")));
    }
    upper_quantile(normal_energies, 1.0 - q).ok_or(Error::InsufficientData {
        what: "energy samples",
        needed: 1,
        got: 0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EcPoint {
    pub threshold: f64,
    pub false_alarms: Proportion,
    pub detections: Proportion,
}

impl EcPoint {
    pub fn p_f(&self) -> f64 {
        self.false_alarms.estimate().unwrap_or(0.0)
    }

    pub fn p_d(&self) -> f64 {
        self.detections.estimate().unwrap_or(0.0)
    }
}

/// Energies of the frames the sequential detector judges (all but the first of each stream).
pub fn judged_energies(streams: &[StreamOutcome]) -> (Vec<f64>, Vec<f64>) {
    let mut normal = Vec::new();
    let mut attacked = Vec::new();
    for s in streams {
        normal.extend(s.normal.iter().skip(1).map(|f| f.energy));
        if let Some(a) = &s.attacked {
            attacked.extend(a.iter().skip(1).map(|f| f.energy));
        }
    }
    (normal, attacked)
}

pub fn ec_point(streams: &[StreamOutcome], threshold: f64) -> Result<EcPoint> {
    let (normal, attacked) = judged_energies(streams);
    let count = |v: &[f64]| -> Result<Proportion> {
        let hits = v
            .iter()
            .map(|&e| ec_decide(e, threshold).map(Decision::is_alarm))
            .collect::<Result<Vec<_>>>()?;
        Ok(Proportion::new(hits.iter().filter(|&&h| h).count(), v.len()))
    };
    Ok(EcPoint {
        threshold,
        false_alarms: count(&normal)?,
        detections: count(&attacked)?,
    })
}

/// Energy detector operated at a target false-alarm rate on the evaluation frames themselves.
pub fn ec_at_false_alarm(streams: &[StreamOutcome], target_pf: f64) -> Result<EcPoint> {
    let (normal, _) = judged_energies(streams);
    ec_point(streams, calibrate_ec(&normal, target_pf)?)
}
