use std::io::Write;

use serde::{Deserialize, Serialize};

use super::config::DetectorConfig;
use super::feature::extract_feature;
use crate::sim::FrameObservation;
use crate::{Error, Result};

pub const MIN_CALIBRATION_FRAMES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Normal,
    Attacked,
    Bootstrap,
}

impl Decision {
    pub fn is_alarm(self) -> bool {
        self == Decision::Attacked
    }
}

impl std::fmt::Display for Decision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Decision::Normal => "normal",
            Decision::Attacked => "attacked",
            Decision::Bootstrap => "bootstrap",
        })
    }
}

/// `c = 1 - |tau - tau_prev| / max(tau_prev, 1)`.
pub fn change_metric(tau: usize, tau_prev: usize) -> f64 {
    let diff = tau.abs_diff(tau_prev) as f64;
    1.0 - diff / tau_prev.max(1) as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogEntry {
    pub frame_index: usize,
    pub tau: usize,
    pub c: Option<f64>,
    pub decision: Decision,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truth: Option<bool>,
    pub solver_iterations: usize,
}

/// Per-stream detector state.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DetectorState {
    pub tau_prev: Option<usize>,
    pub frame_index: usize,
    pub log: Vec<LogEntry>,
}

impl DetectorState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Decision for a feature against the stored reference, without updating anything.
    pub fn judge(&self, tau: usize, delta: f64) -> (Option<f64>, Decision) {
        match self.tau_prev {
            None => (None, Decision::Bootstrap),
            Some(prev) => {
                let c = change_metric(tau, prev);
                (Some(c), if c > delta { Decision::Normal } else { Decision::Attacked })
            }
        }
    }

    /// Applies an already computed feature. The reference is replaced on bootstrap
    /// and normal decisions only.
    pub fn step_with_tau(&mut self, tau: usize, delta: f64, truth: Option<bool>, solver_iterations: usize) -> Decision {
        let (c, decision) = self.judge(tau, delta);
        if decision != Decision::Attacked {
            self.tau_prev = Some(tau);
        }
        self.log.push(LogEntry {
            frame_index: self.frame_index,
            tau,
            c,
            decision,
            truth,
            solver_iterations,
        });
        self.frame_index += 1;
        decision
    }

    pub fn step(&mut self, frame: &FrameObservation, cfg: &DetectorConfig) -> Result<Decision> {
        let sol = extract_feature(frame, cfg)?;
        Ok(self.step_with_tau(sol.tau, cfg.delta, Some(frame.truth_attacked), sol.iterations))
    }

    /// Writes the decision log as one JSON object per line.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        for entry in &self.log {
            serde_json::to_writer(&mut w, entry)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// Change metrics of consecutive features with the reference always advanced.
pub fn calibration_metrics(taus: &[usize]) -> Vec<f64> {
    taus.windows(2).map(|w| change_metric(w[1], w[0])).collect()
}

/// Lower empirical quantile: the `ceil(q n)`-th smallest value (at least the first).
pub fn lower_quantile(values: &[f64], q: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::InsufficientData { what: "quantile samples", needed: 1, got: 0 });
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rank = (q * sorted.len() as f64).ceil() as usize;
    Ok(sorted[rank.clamp(1, sorted.len()) - 1])
}

/// Threshold `delta` as the lower `q`-quantile of the change metric over attack-free frames.
pub fn calibrate_threshold(normal_frames: &[FrameObservation], cfg: &DetectorConfig, q: f64) -> Result<f64> {
    if normal_frames.len() < MIN_CALIBRATION_FRAMES {
        return Err(Error::InsufficientData {
            what: "calibration frames",
            needed: MIN_CALIBRATION_FRAMES,
            got: normal_frames.len(),
        });
    }
    if !(q > 0.0 && q < 0.5) {
        return Err(Error::range("calibration_quantile", format!("requires 0 < q < 0.5, got {q}")));
    }
    let taus = normal_frames
        .iter()
        .map(|f| extract_feature(f, cfg).map(|s| s.tau))
        .collect::<Result<Vec<_>>>()?;
    lower_quantile(&calibration_metrics(&taus), q)
}
